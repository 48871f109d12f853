#include "pcfp/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace pcfp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest step size whose worst-case guarantee for the phased method,
// (1 - e) ln(1 + e) / (e (1 + e)), still reaches 1 - eps_lp.
double internal_step(double eps_lp) {
  auto guarantee = [](double e) {
    return (1.0 - e) * std::log1p(e) / (e * (1.0 + e));
  };
  double lo = 1e-6, hi = eps_lp;
  for (int i = 0; i < 100; ++i) {
    double mid = 0.5 * (lo + hi);
    if (guarantee(mid) >= 1.0 - eps_lp) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

struct ShortestPath {
  double length = kInf;
  std::vector<std::size_t> edges;
};

// Dijkstra from s* to t* with per-edge lengths given by `edge_length`.
// Ties are broken by node index, then by edge order, which keeps runs
// deterministic.
class PathFinder {
 public:
  explicit PathFinder(const ProductNetwork& pn)
      : pn_(pn), dist_(pn.nodes().size()), via_(pn.nodes().size()) {}

  template <typename LengthFn>
  ShortestPath run(LengthFn edge_length) {
    std::fill(dist_.begin(), dist_.end(), kInf);
    std::fill(via_.begin(), via_.end(), kNone);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist_[ProductNetwork::kSuperSource] = 0.0;
    queue.push({0.0, ProductNetwork::kSuperSource});
    while (!queue.empty()) {
      auto [d, u] = queue.top();
      queue.pop();
      if (d > dist_[u]) continue;
      if (u == ProductNetwork::kSuperSink) break;
      for (std::size_t e : pn_.out_edges(u)) {
        std::size_t v = pn_.edges()[e].to;
        double nd = d + edge_length(e);
        if (nd < dist_[v]) {
          dist_[v] = nd;
          via_[v] = e;
          queue.push({nd, v});
        }
      }
    }
    ShortestPath sp;
    sp.length = dist_[ProductNetwork::kSuperSink];
    if (!std::isfinite(sp.length)) return sp;
    for (std::size_t v = ProductNetwork::kSuperSink; v != ProductNetwork::kSuperSource;
         v = pn_.edges()[via_[v]].from) {
      sp.edges.push_back(via_[v]);
    }
    std::reverse(sp.edges.begin(), sp.edges.end());
    return sp;
  }

 private:
  const ProductNetwork& pn_;
  std::vector<double> dist_;
  std::vector<std::size_t> via_;
};

// Packing resources: every finite-capacity edge, node and request demand.
struct Resources {
  std::vector<double> capacity;
  std::vector<double> length;  // dual variable y
  std::vector<double> load;    // unscaled primal usage
};

}  // namespace

Instance scale_capacities(const Instance& inst, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw InvalidArgument("eps must lie in the open interval (0, 1)");
  }
  return inst.with_capacities_scaled(1.0 / (1.0 + eps));
}

double flow_amount(const ProductNetwork& pn, std::span<const double> edge_flow) {
  double amount = 0.0;
  for (std::size_t e : pn.out_edges(ProductNetwork::kSuperSource)) {
    amount += edge_flow[e];
  }
  for (std::size_t e : pn.in_edges(ProductNetwork::kSuperSource)) {
    amount -= edge_flow[e];
  }
  return amount;
}

double conservation_error(const ProductNetwork& pn,
                          std::span<const double> edge_flow) {
  double worst = 0.0;
  for (std::size_t v = 2; v < pn.nodes().size(); ++v) {
    double balance = 0.0;
    for (std::size_t e : pn.in_edges(v)) balance += edge_flow[e];
    for (std::size_t e : pn.out_edges(v)) balance -= edge_flow[e];
    worst = std::max(worst, std::abs(balance));
  }
  return worst;
}

SubstrateLoad project_flow(const Instance& inst, const ProductNetwork& pn,
                           const ProductFlow& f) {
  SubstrateLoad load;
  load.edge.assign(inst.substrate().edges.size(), 0.0);
  load.node.assign(inst.substrate().nodes.size(), 0.0);
  for (std::size_t e = 0; e < pn.edges().size(); ++e) {
    const ProductEdge& pe = pn.edges()[e];
    if (pe.kind == ProductEdgeKind::kRouting) {
      load.edge[pe.substrate_edge] += f.edge_flow[e];
    } else if (pe.kind == ProductEdgeKind::kProcessing) {
      load.node[pe.substrate_node] += f.edge_flow[e];
    }
  }
  return load;
}

SubstrateLoad total_load(const Instance& inst,
                         std::span<const ProductNetwork> networks,
                         std::span<const ProductFlow> flows) {
  SubstrateLoad total;
  total.edge.assign(inst.substrate().edges.size(), 0.0);
  total.node.assign(inst.substrate().nodes.size(), 0.0);
  for (const ProductFlow& f : flows) {
    SubstrateLoad l = project_flow(inst, networks[f.request], f);
    for (std::size_t e = 0; e < l.edge.size(); ++e) total.edge[e] += l.edge[e];
    for (std::size_t v = 0; v < l.node.size(); ++v) total.node[v] += l.node[v];
  }
  return total;
}

double fractional_benefit(const Instance& inst, const FractionalSolution& sol) {
  double b = 0.0;
  for (const ProductFlow& f : sol.flows) {
    b += inst.requests()[f.request].benefit * f.amount;
  }
  return b;
}

ProductFlow eliminate_cycles(const ProductNetwork& pn, const ProductFlow& f,
                             std::size_t* cancelled) {
  ProductFlow out = f;
  out.edge_flow = cancel_flow_cycles(pn, f.edge_flow, cancelled);
  return out;
}

FractionalSolution solve_fractional(const Instance& inst,
                                    std::span<const ProductNetwork> networks,
                                    const SolverOptions& options) {
  if (!(options.eps_lp > 0.0 && options.eps_lp < 1.0)) {
    throw InvalidArgument("eps_lp must lie in the open interval (0, 1)");
  }
  const auto& requests = inst.requests();
  const std::size_t num_edges = inst.substrate().edges.size();
  const std::size_t num_nodes = inst.substrate().nodes.size();
  const std::size_t num_requests = requests.size();

  FractionalSolution sol;
  sol.stats.eps_internal = internal_step(options.eps_lp);
  const double eps = sol.stats.eps_internal;
  for (std::size_t i = 0; i < num_requests; ++i) {
    ProductFlow f;
    f.request = i;
    f.edge_flow.assign(networks[i].edges().size(), 0.0);
    sol.flows.push_back(std::move(f));
  }

  // Resource layout: [edges | nodes | demands]; kNone marks unbounded ones.
  Resources res;
  std::vector<std::size_t> edge_res(num_edges, kNone), node_res(num_nodes, kNone),
      demand_res(num_requests, kNone);
  auto add_resource = [&](double cap) {
    res.capacity.push_back(cap);
    return res.capacity.size() - 1;
  };
  for (std::size_t e = 0; e < num_edges; ++e) {
    double cap = inst.substrate().edges[e].capacity;
    if (std::isfinite(cap)) edge_res[e] = add_resource(cap);
  }
  for (std::size_t v = 0; v < num_nodes; ++v) {
    double cap = inst.substrate().nodes[v].capacity;
    if (std::isfinite(cap)) node_res[v] = add_resource(cap);
  }
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < num_requests; ++i) {
    if (networks[i].routable()) {
      demand_res[i] = add_resource(requests[i].demand);
      active.push_back(i);
    }
  }
  if (active.empty()) {
    sol.load = total_load(inst, networks, sol.flows);
    sol.stats.stop_reason = "no routable request";
    return sol;
  }

  const double m = static_cast<double>(res.capacity.size());
  // delta = (1 + eps) ((1 + eps) m)^(-1/eps), floored to stay a normal double.
  const double log_delta = std::log1p(eps) - std::log((1.0 + eps) * m) / eps;
  const double delta = std::exp(std::max(log_delta, -650.0));
  res.length.resize(res.capacity.size());
  res.load.assign(res.capacity.size(), 0.0);
  double dual_value = 0.0;  // D(y) = sum cap * y
  for (std::size_t r = 0; r < res.capacity.size(); ++r) {
    res.length[r] = delta / res.capacity[r];
    dual_value += delta;
  }

  // Resource consumed by each product edge, per request.
  std::vector<std::vector<std::size_t>> edge_resource(num_requests);
  for (std::size_t i : active) {
    const ProductNetwork& pn = networks[i];
    auto& map = edge_resource[i];
    map.assign(pn.edges().size(), kNone);
    for (std::size_t e = 0; e < pn.edges().size(); ++e) {
      const ProductEdge& pe = pn.edges()[e];
      switch (pe.kind) {
        case ProductEdgeKind::kRouting: map[e] = edge_res[pe.substrate_edge]; break;
        case ProductEdgeKind::kProcessing: map[e] = node_res[pe.substrate_node]; break;
        case ProductEdgeKind::kSourceLink: map[e] = demand_res[i]; break;
        case ProductEdgeKind::kSinkLink: break;
      }
    }
  }

  std::vector<PathFinder> finders;
  finders.reserve(num_requests);
  for (std::size_t i = 0; i < num_requests; ++i) finders.emplace_back(networks[i]);

  auto shortest = [&](std::size_t i) {
    ++sol.stats.shortest_paths;
    const auto& map = edge_resource[i];
    return finders[i].run([&](std::size_t e) {
      return map[e] == kNone ? 0.0 : res.length[map[e]];
    });
  };
  auto path_length = [&](std::size_t i, const std::vector<std::size_t>& path) {
    double len = 0.0;
    for (std::size_t e : path) {
      if (edge_resource[i][e] != kNone) len += res.length[edge_resource[i][e]];
    }
    return len;
  };

  double primal = 0.0;  // unscaled benefit routed so far
  std::vector<std::pair<std::size_t, int>> usage;
  auto augment = [&](std::size_t i, const std::vector<std::size_t>& path) {
    usage.clear();
    for (std::size_t e : path) {
      std::size_t r = edge_resource[i][e];
      if (r != kNone) usage.push_back({r, 1});
    }
    std::sort(usage.begin(), usage.end());
    std::size_t w = 0;
    for (std::size_t k = 0; k < usage.size(); ++k) {
      if (w > 0 && usage[w - 1].first == usage[k].first) {
        ++usage[w - 1].second;
      } else {
        usage[w++] = usage[k];
      }
    }
    usage.resize(w);
    double amount = kInf;
    for (auto [r, count] : usage) amount = std::min(amount, res.capacity[r] / count);
    for (auto [r, count] : usage) {
      double used = amount * count;
      res.load[r] += used;
      double old = res.length[r];
      res.length[r] = old * (1.0 + eps * used / res.capacity[r]);
      dual_value += res.capacity[r] * (res.length[r] - old);
    }
    for (std::size_t e : path) sol.flows[i].edge_flow[e] += amount;
    primal += requests[i].benefit * amount;
    ++sol.stats.augmentations;
    if (sol.stats.augmentations > options.max_augmentations) {
      std::ostringstream msg;
      msg << "fractional solver did not converge within " << options.max_augmentations
          << " augmentations (phases " << sol.stats.phases << ", dual value "
          << dual_value << ", best upper bound " << sol.stats.upper_bound << ")";
      throw SolverError(msg.str());
    }
  };

  // Lower bounds on each request's current benefit-normalized path length;
  // lengths only grow, so a stale value stays a valid lower bound.
  std::vector<double> ratio_lb(num_requests, kInf);
  std::vector<std::vector<std::size_t>> cached_path(num_requests);
  for (std::size_t i : active) {
    ShortestPath sp = shortest(i);
    ratio_lb[i] = sp.length / requests[i].benefit;
    cached_path[i] = std::move(sp.edges);
  }

  double upper_bound = kInf;
  for (;;) {
    double alpha = kInf;
    for (std::size_t i : active) alpha = std::min(alpha, ratio_lb[i]);
    // y / alpha is dual feasible, so D(y) / alpha bounds the optimum.
    upper_bound = std::min(upper_bound, dual_value / alpha);
    sol.stats.upper_bound = upper_bound;
    double lambda = 0.0;
    for (std::size_t r = 0; r < res.capacity.size(); ++r) {
      lambda = std::max(lambda, res.load[r] / res.capacity[r]);
    }
    if (lambda > 0.0 && primal / lambda >= (1.0 - options.eps_lp) * upper_bound) {
      sol.stats.stop_reason = "certified gap";
      break;
    }
    if (dual_value >= 1.0) {
      sol.stats.stop_reason = "dual threshold";
      break;
    }
    ++sol.stats.phases;
    const double threshold = alpha * (1.0 + eps);
    for (std::size_t i : active) {
      if (ratio_lb[i] >= threshold) continue;
      const double b = requests[i].benefit;
      while (dual_value < 1.0) {
        if (path_length(i, cached_path[i]) / b >= threshold) {
          ShortestPath sp = shortest(i);
          ratio_lb[i] = sp.length / b;
          cached_path[i] = std::move(sp.edges);
          if (ratio_lb[i] >= threshold) break;
        }
        augment(i, cached_path[i]);
      }
      if (dual_value >= 1.0) break;
    }
  }

  double lambda = 0.0;
  for (std::size_t r = 0; r < res.capacity.size(); ++r) {
    lambda = std::max(lambda, res.load[r] / res.capacity[r]);
  }
  if (lambda > 0.0) {
    for (ProductFlow& f : sol.flows) {
      for (double& x : f.edge_flow) x /= lambda;
    }
  }
  for (ProductFlow& f : sol.flows) {
    f.amount = flow_amount(networks[f.request], f.edge_flow);
  }
  sol.benefit = fractional_benefit(inst, sol);
  sol.load = total_load(inst, networks, sol.flows);
  return sol;
}

}  // namespace pcfp
