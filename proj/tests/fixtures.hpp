#pragma once

#include <string>
#include <vector>

#include "pcfp/fractional.hpp"
#include "pcfp/instance.hpp"
#include "pcfp/product_graph.hpp"

namespace fx {

using pcfp::Instance;
using pcfp::Request;

// Chain request s -> x1 -> ... -> xk -> t. `stage_nodes` has k + 2 entries
// (s, x1..xk, t), `layer_edges` has k + 1 entries (y1..y{k+1}).
inline Request chain(const std::string& id, double demand, double benefit,
                     const std::vector<std::vector<std::string>>& stage_nodes,
                     const std::vector<std::vector<std::string>>& layer_edges) {
  Request r;
  r.id = id;
  r.demand = demand;
  r.benefit = benefit;
  const std::size_t k = stage_nodes.size() - 2;
  std::vector<std::string> names{"s"};
  for (std::size_t j = 1; j <= k; ++j) names.push_back("x" + std::to_string(j));
  names.push_back("t");
  r.graph.vertices = names;
  r.graph.source = "s";
  r.graph.sink = "t";
  for (std::size_t j = 0; j + 1 < names.size(); ++j) {
    std::string y = "y" + std::to_string(j + 1);
    r.graph.edges.push_back({y, names[j], names[j + 1]});
    r.allowed_edges[y] = layer_edges[j];
  }
  for (std::size_t j = 0; j < names.size(); ++j) r.allowed_nodes[names[j]] = stage_nodes[j];
  return r;
}

inline pcfp::SubstrateNetwork substrate(
    const std::vector<std::string>& nodes,
    const std::vector<pcfp::SubstrateEdge>& edges) {
  pcfp::SubstrateNetwork n;
  for (const auto& v : nodes) n.nodes.push_back({v, pcfp::kUnbounded});
  n.edges = edges;
  return n;
}

// Substrate a - b over e1; request s -(y1)-> x -(y2)-> t with U(s)={a},
// U(x)={b}, U(t)={a}, U(y1)=U(y2)={e1}.
inline Instance two_layer(double cap = 10.0, double demand = 1.0, double benefit = 1.0) {
  return Instance(substrate({"a", "b"}, {{"e1", "a", "b", cap}}),
                  {chain("r1", demand, benefit, {{"a"}, {"b"}, {"a"}}, {{"e1"}, {"e1"}})});
}

inline const char* kTwoLayerDocument = R"({
  "substrate": {
    "nodes": [{"id": "a"}, {"id": "b"}],
    "edges": [{"id": "e1", "a": "a", "b": "b", "capacity": 10}]
  },
  "requests": [{
    "id": "r1", "demand": 1, "benefit": 1,
    "pr_vertices": [{"id": "s"}, {"id": "x"}, {"id": "t"}],
    "pr_edges": [{"id": "y1", "from": "s", "to": "x"}, {"id": "y2", "from": "x", "to": "t"}],
    "source": "s", "sink": "t",
    "allowed_nodes": {"s": ["a"], "x": ["b"], "t": ["a"]},
    "allowed_edges": {"y1": ["e1"], "y2": ["e1"]}
  }]
})";

// Pure routing a -> b over one edge.
inline Request routing(const std::string& id, double demand, double benefit,
                       const std::string& from = "a", const std::string& to = "b",
                       const std::vector<std::string>& edges = {"e1"}) {
  return chain(id, demand, benefit, {{from}, {to}}, {edges});
}

// Two routing requests on one cap-1 edge, benefits 1 and 2.
inline Instance contention() {
  return Instance(substrate({"a", "b"}, {{"e1", "a", "b", 1.0}}),
                  {routing("r1", 1, 1), routing("r2", 1, 2)});
}

// Three layers: a -(y1)-> {b, c} -(y2)-> d -(y3)-> d.
inline Instance three_layer(double demand = 1.0) {
  auto net = substrate({"a", "b", "c", "d"}, {{"eab", "a", "b", 10},
                                              {"eac", "a", "c", 10},
                                              {"ebd", "b", "d", 10},
                                              {"ecd", "c", "d", 10}});
  return Instance(net, {chain("r1", demand, 1.0, {{"a"}, {"b", "c"}, {"d"}, {"d"}},
                              {{"eab", "eac"}, {"ebd", "ecd"}, {"ebd"}})});
}

inline std::size_t find_edge(const pcfp::ProductNetwork& pn, std::size_t from,
                             std::size_t to) {
  for (std::size_t e = 0; e < pn.edges().size(); ++e) {
    if (pn.edges()[e].from == from && pn.edges()[e].to == to) return e;
  }
  return pcfp::kNone;
}

// Product node (v, layer) by substrate id and pr-edge index.
inline std::size_t node(const Instance& inst, const pcfp::ProductNetwork& pn,
                        const std::string& v, std::size_t layer) {
  return pn.find_node(inst.node_index(v), layer);
}

// Flow on the three_layer fixture: amount 0.8 split 0.75/0.25 over b and c.
inline pcfp::ProductFlow three_layer_flow(const Instance& inst,
                                          const pcfp::ProductNetwork& pn) {
  pcfp::ProductFlow f;
  f.request = 0;
  f.edge_flow.assign(pn.edges().size(), 0.0);
  auto set = [&](std::size_t u, std::size_t v, double x) {
    std::size_t e = find_edge(pn, u, v);
    if (e == pcfp::kNone) throw std::logic_error("fixture edge missing");
    f.edge_flow[e] = x;
  };
  const std::size_t S = pcfp::ProductNetwork::kSuperSource;
  const std::size_t T = pcfp::ProductNetwork::kSuperSink;
  set(S, node(inst, pn, "a", 0), 0.8);
  set(node(inst, pn, "a", 0), node(inst, pn, "b", 0), 0.6);
  set(node(inst, pn, "a", 0), node(inst, pn, "c", 0), 0.2);
  set(node(inst, pn, "b", 0), node(inst, pn, "b", 1), 0.6);
  set(node(inst, pn, "c", 0), node(inst, pn, "c", 1), 0.2);
  set(node(inst, pn, "b", 1), node(inst, pn, "d", 1), 0.6);
  set(node(inst, pn, "c", 1), node(inst, pn, "d", 1), 0.2);
  set(node(inst, pn, "d", 1), node(inst, pn, "d", 2), 0.8);
  set(node(inst, pn, "d", 2), T, 0.8);
  f.amount = 0.8;
  return f;
}

}  // namespace fx
