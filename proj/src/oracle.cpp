#include "pcfp/oracle.hpp"

#include <string>

namespace pcfp {
namespace {

constexpr double kLoadSlack = 1e-9;

struct Use {
  bool is_node = false;
  std::size_t index = kNone;
  double amount = 0.0;
};

struct Search {
  const Instance* inst = nullptr;
  std::vector<std::vector<std::vector<Use>>> options;  // request -> path -> uses
  std::vector<double> edge_load;
  std::vector<double> node_load;
  std::vector<std::size_t> choice;  // 0 = reject, k = path k - 1
  std::vector<std::size_t> best_choice;
  double best = -1.0;

  bool fits(const std::vector<Use>& uses) const {
    const auto& net = inst->substrate();
    // A path may load one resource several times; check the summed effect.
    std::vector<double> e = edge_load, v = node_load;
    for (const Use& u : uses) {
      if (u.is_node) {
        v[u.index] += u.amount;
        if (v[u.index] > net.nodes[u.index].capacity + kLoadSlack) return false;
      } else {
        e[u.index] += u.amount;
        if (e[u.index] > net.edges[u.index].capacity + kLoadSlack) return false;
      }
    }
    return true;
  }

  void apply(const std::vector<Use>& uses, double sign) {
    for (const Use& u : uses) {
      (u.is_node ? node_load : edge_load)[u.index] += sign * u.amount;
    }
  }

  void run(std::size_t i, double benefit) {
    if (i == options.size()) {
      if (benefit > best + 1e-12) {
        best = benefit;
        best_choice = choice;
      }
      return;
    }
    choice[i] = 0;
    run(i + 1, benefit);
    for (std::size_t k = 0; k < options[i].size(); ++k) {
      if (!fits(options[i][k])) continue;
      apply(options[i][k], 1.0);
      choice[i] = k + 1;
      run(i + 1, benefit + inst->requests()[i].benefit);
      apply(options[i][k], -1.0);
    }
    choice[i] = 0;
  }
};

}  // namespace

std::vector<ProductPath> enumerate_realizations(const ProductNetwork& pn,
                                                std::size_t max_edges) {
  std::vector<ProductPath> out;
  if (!pn.routable()) return out;
  std::vector<char> on_path(pn.nodes().size(), 0);
  std::vector<std::size_t> edges;
  auto dfs = [&](auto&& self, std::size_t u) -> void {
    if (u == ProductNetwork::kSuperSink) {
      if (edges.size() > max_edges) {
        throw LimitError("path length limit exceeded: " + std::to_string(edges.size()) +
                         " > " + std::to_string(max_edges) + " edges");
      }
      out.push_back(ProductPath{pn.request(), edges});
      return;
    }
    on_path[u] = 1;
    for (std::size_t e : pn.out_edges(u)) {
      std::size_t v = pn.edges()[e].to;
      if (on_path[v]) continue;
      edges.push_back(e);
      self(self, v);
      edges.pop_back();
    }
    on_path[u] = 0;
  };
  dfs(dfs, ProductNetwork::kSuperSource);
  return out;
}

IntegralSolution brute_force_integral_opt(const Instance& inst,
                                          std::span<const ProductNetwork> networks,
                                          const OracleLimits& limits) {
  const auto& requests = inst.requests();
  if (requests.size() > limits.max_requests) {
    throw LimitError("request limit exceeded: " + std::to_string(requests.size()) +
                     " > " + std::to_string(limits.max_requests) + " requests");
  }
  if (networks.size() != requests.size()) {
    throw InvalidArgument("one product network per request is required");
  }
  for (const ProductNetwork& pn : networks) {
    if (pn.nodes().size() > limits.max_product_nodes) {
      throw LimitError("product network limit exceeded for request '" +
                       requests[pn.request()].id + "': " +
                       std::to_string(pn.nodes().size()) + " > " +
                       std::to_string(limits.max_product_nodes) + " nodes");
    }
  }

  Search s;
  s.inst = &inst;
  s.edge_load.assign(inst.substrate().edges.size(), 0.0);
  s.node_load.assign(inst.substrate().nodes.size(), 0.0);
  s.choice.assign(requests.size(), 0);
  std::vector<std::vector<ProductPath>> paths(requests.size());
  s.options.resize(requests.size());
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const ProductNetwork& pn = networks[i];
    paths[i] = enumerate_realizations(pn, limits.max_path_edges);
    for (const ProductPath& p : paths[i]) {
      std::vector<Use> uses;
      for (std::size_t id : p.edges) {
        const ProductEdge& e = pn.edges()[id];
        if (e.kind == ProductEdgeKind::kRouting) {
          uses.push_back({false, e.substrate_edge, requests[i].demand});
        } else if (e.kind == ProductEdgeKind::kProcessing) {
          uses.push_back({true, e.substrate_node, requests[i].demand});
        }
      }
      s.options[i].push_back(std::move(uses));
    }
  }
  s.run(0, 0.0);

  IntegralSolution sol;
  sol.outcomes.resize(requests.size());
  for (std::size_t i = 0; i < requests.size(); ++i) {
    RequestOutcome& o = sol.outcomes[i];
    o.path.request = i;
    if (s.best_choice[i] == 0) continue;
    o.accepted = true;
    o.path = paths[i][s.best_choice[i] - 1];
    sol.benefit += requests[i].benefit;
    sol.flow_benefit += requests[i].benefit * requests[i].demand;
  }
  return sol;
}

}  // namespace pcfp
