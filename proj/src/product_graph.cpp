#include "pcfp/product_graph.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"

namespace pcfp {
namespace {

std::vector<std::size_t> resolve_nodes(const Instance& inst,
                                       const std::vector<std::string>* ids) {
  std::vector<std::size_t> out;
  if (ids == nullptr) return out;
  for (const std::string& id : *ids) {
    std::size_t v = inst.node_index(id);
    if (v != kNone) out.push_back(v);
  }
  return out;
}

template <typename Map>
const std::vector<std::string>* lookup(const Map& m, const std::string& key) {
  auto it = m.find(key);
  return it == m.end() ? nullptr : &it->second;
}

std::vector<char> reachable(std::size_t start, std::size_t n,
                            const std::vector<ProductEdge>& edges, bool forward) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const ProductEdge& e : edges) {
    if (forward) {
      adj[e.from].push_back(e.to);
    } else {
      adj[e.to].push_back(e.from);
    }
  }
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

}  // namespace

const char* edge_kind_name(ProductEdgeKind kind) {
  switch (kind) {
    case ProductEdgeKind::kSourceLink: return "source_link";
    case ProductEdgeKind::kRouting: return "routing";
    case ProductEdgeKind::kProcessing: return "processing";
    case ProductEdgeKind::kSinkLink: return "sink_link";
  }
  return "?";
}

std::size_t ProductNetwork::find_node(std::size_t substrate_node,
                                      std::size_t layer) const {
  for (std::size_t i = 2; i < nodes_.size(); ++i) {
    if (nodes_[i].substrate_node == substrate_node && nodes_[i].layer == layer) {
      return i;
    }
  }
  return kNone;
}

ProductNetwork build_product_network(const Instance& inst, std::size_t request) {
  const Request& r = inst.requests().at(request);
  const PrGraph& g = r.graph;
  const std::size_t layers = g.edges.size();

  // Candidate node set per layer: endpoints of allowed edges plus the allowed
  // placements of both pr-endpoints of the layer.
  std::vector<ProductNode> nodes(2);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  std::vector<std::vector<std::size_t>> allowed_edges(layers);
  for (std::size_t y = 0; y < layers; ++y) {
    std::set<std::size_t> members;
    if (const auto* ids = lookup(r.allowed_edges, g.edges[y].id)) {
      for (const std::string& id : *ids) {
        std::size_t e = inst.edge_index(id);
        if (e == kNone) continue;
        const SubstrateEdge& se = inst.substrate().edges[e];
        std::size_t a = inst.node_index(se.a), b = inst.node_index(se.b);
        if (a == kNone || b == kNone) continue;
        allowed_edges[y].push_back(e);
        members.insert(a);
        members.insert(b);
      }
    }
    for (const std::string* x : {&g.edges[y].from, &g.edges[y].to}) {
      for (std::size_t v : resolve_nodes(inst, lookup(r.allowed_nodes, *x))) {
        members.insert(v);
      }
    }
    for (std::size_t v : members) {
      index[{v, y}] = nodes.size();
      nodes.push_back({v, y});
    }
  }

  std::vector<ProductEdge> edges;
  const std::size_t s = g.vertex_index(g.source);
  const std::size_t t = g.vertex_index(g.sink);
  for (std::size_t y = 0; y < layers; ++y) {
    if (g.vertex_index(g.edges[y].from) != s) continue;
    for (std::size_t v : resolve_nodes(inst, lookup(r.allowed_nodes, g.source))) {
      ProductEdge e;
      e.from = ProductNetwork::kSuperSource;
      e.to = index.at({v, y});
      e.kind = ProductEdgeKind::kSourceLink;
      e.substrate_node = v;
      edges.push_back(e);
    }
  }
  for (std::size_t y = 0; y < layers; ++y) {
    for (std::size_t se : allowed_edges[y]) {
      const SubstrateEdge& link = inst.substrate().edges[se];
      std::size_t a = inst.node_index(link.a), b = inst.node_index(link.b);
      if (a == b) continue;  // a self-loop can never be on a simple path
      for (auto [u, v] : {std::pair{a, b}, std::pair{b, a}}) {
        ProductEdge e;
        e.from = index.at({u, y});
        e.to = index.at({v, y});
        e.kind = ProductEdgeKind::kRouting;
        e.substrate_edge = se;
        edges.push_back(e);
      }
    }
  }
  // Processing edges run from each incoming pr-edge of x to each outgoing one.
  for (std::size_t x = 0; x < g.vertices.size(); ++x) {
    auto placements = resolve_nodes(inst, lookup(r.allowed_nodes, g.vertices[x]));
    for (std::size_t yin = 0; yin < layers; ++yin) {
      if (g.vertex_index(g.edges[yin].to) != x) continue;
      for (std::size_t yout = 0; yout < layers; ++yout) {
        if (yout == yin || g.vertex_index(g.edges[yout].from) != x) continue;
        for (std::size_t v : placements) {
          ProductEdge e;
          e.from = index.at({v, yin});
          e.to = index.at({v, yout});
          e.kind = ProductEdgeKind::kProcessing;
          e.substrate_node = v;
          e.pr_vertex = x;
          edges.push_back(e);
        }
      }
    }
  }
  for (std::size_t y = 0; y < layers; ++y) {
    if (g.vertex_index(g.edges[y].to) != t) continue;
    for (std::size_t v : resolve_nodes(inst, lookup(r.allowed_nodes, g.sink))) {
      ProductEdge e;
      e.from = index.at({v, y});
      e.to = ProductNetwork::kSuperSink;
      e.kind = ProductEdgeKind::kSinkLink;
      e.substrate_node = v;
      edges.push_back(e);
    }
  }

  // Trim to the useful part and renumber.
  auto fwd = reachable(ProductNetwork::kSuperSource, nodes.size(), edges, true);
  auto bwd = reachable(ProductNetwork::kSuperSink, nodes.size(), edges, false);
  ProductNetwork pn;
  pn.request_ = request;
  pn.layer_count_ = layers;
  pn.routable_ = fwd[ProductNetwork::kSuperSink] != 0;
  std::vector<std::size_t> renumber(nodes.size(), kNone);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i < 2 || (fwd[i] && bwd[i])) {
      renumber[i] = pn.nodes_.size();
      pn.nodes_.push_back(nodes[i]);
    }
  }
  pn.out_.resize(pn.nodes_.size());
  pn.in_.resize(pn.nodes_.size());
  for (ProductEdge e : edges) {
    if (renumber[e.from] == kNone || renumber[e.to] == kNone) continue;
    if (!fwd[e.from] || !bwd[e.to]) continue;
    e.from = renumber[e.from];
    e.to = renumber[e.to];
    pn.out_[e.from].push_back(pn.edges_.size());
    pn.in_[e.to].push_back(pn.edges_.size());
    pn.edges_.push_back(e);
  }
  return pn;
}

std::vector<ProductNetwork> build_product_networks(const Instance& inst) {
  std::vector<ProductNetwork> out;
  out.reserve(inst.requests().size());
  for (std::size_t i = 0; i < inst.requests().size(); ++i) {
    out.push_back(build_product_network(inst, i));
  }
  return out;
}

SubstrateWalk project_path(const ProductNetwork& pn, const ProductPath& p) {
  if (p.edges.empty()) throw InvalidArgument("cannot project an empty path");
  SubstrateWalk walk;
  for (std::size_t k = 0; k < p.edges.size(); ++k) {
    if (p.edges[k] >= pn.edges().size()) {
      throw InvalidArgument("path edge " + std::to_string(p.edges[k]) +
                            " is not in the product network");
    }
    const ProductEdge& e = pn.edges()[p.edges[k]];
    if (k > 0 && pn.edges()[p.edges[k - 1]].to != e.from) {
      throw InvalidArgument("path edges " + std::to_string(k - 1) + " and " +
                            std::to_string(k) + " are not consecutive");
    }
    if (walk.start == kNone && e.from != ProductNetwork::kSuperSource) {
      walk.start = pn.nodes()[e.from].substrate_node;
    }
    switch (e.kind) {
      case ProductEdgeKind::kRouting: {
        WalkStep step;
        step.kind = WalkStep::Kind::kRoute;
        step.from = pn.nodes()[e.from].substrate_node;
        step.to = pn.nodes()[e.to].substrate_node;
        step.edge = e.substrate_edge;
        walk.steps.push_back(step);
        break;
      }
      case ProductEdgeKind::kProcessing: {
        WalkStep step;
        step.kind = WalkStep::Kind::kProcess;
        step.from = step.to = e.substrate_node;
        step.pr_vertex = e.pr_vertex;
        walk.steps.push_back(step);
        break;
      }
      case ProductEdgeKind::kSourceLink:
        walk.start = e.substrate_node;
        break;
      case ProductEdgeKind::kSinkLink:
        break;
    }
  }
  return walk;
}

int multiplicity_edge(const ProductNetwork& pn, const ProductPath& p,
                      std::size_t substrate_edge) {
  int count = 0;
  for (std::size_t id : p.edges) {
    const ProductEdge& e = pn.edges().at(id);
    if (e.kind == ProductEdgeKind::kRouting && e.substrate_edge == substrate_edge) {
      ++count;
    }
  }
  return count;
}

int multiplicity_vertex(const ProductNetwork& pn, const ProductPath& p,
                        std::size_t substrate_node) {
  int count = 0;
  for (std::size_t id : p.edges) {
    const ProductEdge& e = pn.edges().at(id);
    if (e.kind == ProductEdgeKind::kProcessing && e.substrate_node == substrate_node) {
      ++count;
    }
  }
  return count;
}

bool is_valid_realization(const ProductNetwork& pn, const ProductPath& p) {
  if (p.edges.empty() || p.request != pn.request()) return false;
  std::vector<char> visited(pn.nodes().size(), 0);
  std::size_t at = ProductNetwork::kSuperSource;
  visited[at] = 1;
  for (std::size_t id : p.edges) {
    if (id >= pn.edges().size()) return false;
    const ProductEdge& e = pn.edges()[id];
    if (e.from != at || visited[e.to]) return false;
    visited[e.to] = 1;
    at = e.to;
  }
  return at == ProductNetwork::kSuperSink;
}

std::vector<std::size_t> realized_pr_path(const ProductNetwork& pn,
                                          const ProductPath& p) {
  std::vector<std::size_t> layers;
  for (std::size_t id : p.edges) {
    const ProductEdge& e = pn.edges().at(id);
    for (std::size_t n : {e.from, e.to}) {
      std::size_t y = pn.nodes()[n].layer;
      if (y != kNone && (layers.empty() || layers.back() != y)) layers.push_back(y);
    }
  }
  return layers;
}

std::string node_label(const Instance& inst, const ProductNetwork& pn,
                       std::size_t node) {
  if (node == ProductNetwork::kSuperSource) return "s*";
  if (node == ProductNetwork::kSuperSink) return "t*";
  const ProductNode& n = pn.nodes().at(node);
  return "(" + inst.substrate().nodes[n.substrate_node].id + "," +
         inst.requests()[pn.request()].graph.edges[n.layer].id + ")";
}

std::string dump_product_networks(const Instance& inst,
                                  std::span<const ProductNetwork> networks) {
  using nlohmann::ordered_json;
  ordered_json doc = ordered_json::array();
  for (const ProductNetwork& pn : networks) {
    const Request& r = inst.requests()[pn.request()];
    ordered_json nodes = ordered_json::array();
    for (std::size_t i = 0; i < pn.nodes().size(); ++i) {
      ordered_json n = {{"index", i}, {"label", node_label(inst, pn, i)}};
      if (pn.nodes()[i].substrate_node != kNone) {
        n["node"] = inst.substrate().nodes[pn.nodes()[i].substrate_node].id;
        n["layer"] = r.graph.edges[pn.nodes()[i].layer].id;
      }
      nodes.push_back(std::move(n));
    }
    ordered_json edges = ordered_json::array();
    for (std::size_t i = 0; i < pn.edges().size(); ++i) {
      const ProductEdge& e = pn.edges()[i];
      ordered_json j = {{"index", i},
                        {"from", node_label(inst, pn, e.from)},
                        {"to", node_label(inst, pn, e.to)},
                        {"kind", edge_kind_name(e.kind)}};
      if (e.substrate_edge != kNone) {
        j["substrate_edge"] = inst.substrate().edges[e.substrate_edge].id;
      }
      if (e.kind == ProductEdgeKind::kProcessing) {
        j["substrate_node"] = inst.substrate().nodes[e.substrate_node].id;
        j["pr_vertex"] = r.graph.vertices[e.pr_vertex];
      }
      edges.push_back(std::move(j));
    }
    doc.push_back({{"request", r.id},
                   {"routable", pn.routable()},
                   {"nodes", std::move(nodes)},
                   {"edges", std::move(edges)}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace pcfp
