#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pcfp/instance.hpp"
#include "pcfp/product_graph.hpp"

namespace pcfp {

// Flow of one request over its own product network, indexed by product edge.
struct ProductFlow {
  std::size_t request = kNone;
  std::vector<double> edge_flow;
  double amount = 0.0;  // net out-flow of s*
};

struct SubstrateLoad {
  std::vector<double> edge;
  std::vector<double> node;
};

struct SolverStats {
  double eps_internal = 0.0;  // multiplicative-weights step size
  std::uint64_t phases = 0;
  std::uint64_t augmentations = 0;
  std::uint64_t shortest_paths = 0;
  double upper_bound = 0.0;  // certified dual bound on the optimum benefit
  std::string stop_reason;
};

struct FractionalSolution {
  std::vector<ProductFlow> flows;  // one per request, in instance order
  double benefit = 0.0;
  SubstrateLoad load;
  SolverStats stats;
};

struct SolverOptions {
  double eps_lp = 0.05;
  std::uint64_t max_augmentations = 200'000'000;
};

// Copy of `inst` with every finite capacity divided by (1 + eps).
// Throws InvalidArgument unless 0 < eps < 1.
Instance scale_capacities(const Instance& inst, double eps);

// Maximum-benefit fractional solution within a factor (1 - eps_lp), computed
// with a width-free multiplicative-weights packing method over the product
// networks. Resources are substrate edges (routing edges), finite-capacity
// substrate nodes (processing edges) and one demand resource per request on
// its s* links. Throws SolverError when the augmentation cap is exceeded.
FractionalSolution solve_fractional(const Instance& inst,
                                    std::span<const ProductNetwork> networks,
                                    const SolverOptions& options = {});

double flow_amount(const ProductNetwork& pn, std::span<const double> edge_flow);

// Largest |in - out| over product nodes other than s* and t*.
double conservation_error(const ProductNetwork& pn,
                          std::span<const double> edge_flow);

SubstrateLoad project_flow(const Instance& inst, const ProductNetwork& pn,
                           const ProductFlow& f);
SubstrateLoad total_load(const Instance& inst,
                         std::span<const ProductNetwork> networks,
                         std::span<const ProductFlow> flows);

double fractional_benefit(const Instance& inst, const FractionalSolution& sol);

// Cancels flow around directed cycles of the support until it is acyclic.
// Never increases an edge flow; the amount is unchanged since s* has no
// in-edges and t* no out-edges. Works over any ordered field.
template <typename T>
std::vector<T> cancel_flow_cycles(const ProductNetwork& pn, std::vector<T> flow,
                                  std::size_t* cancelled = nullptr) {
  const std::size_t n = pn.nodes().size();
  const T zero{};
  std::size_t count = 0;
  for (;;) {
    // Iterative DFS over the support; `stack` holds (node, next out index),
    // `via` the edge used to enter each stacked node.
    std::vector<unsigned char> color(n, 0);  // 0 new, 1 on stack, 2 done
    std::vector<std::size_t> via(n, kNone);
    std::vector<std::size_t> cycle;
    for (std::size_t root = 0; root < n && cycle.empty(); ++root) {
      if (color[root] != 0) continue;
      std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
      color[root] = 1;
      while (!stack.empty() && cycle.empty()) {
        auto& [u, next] = stack.back();
        const auto& outs = pn.out_edges(u);
        if (next == outs.size()) {
          color[u] = 2;
          stack.pop_back();
          continue;
        }
        std::size_t e = outs[next++];
        if (!(flow[e] > zero)) continue;
        std::size_t v = pn.edges()[e].to;
        if (color[v] == 0) {
          color[v] = 1;
          via[v] = e;
          stack.push_back({v, 0});
        } else if (color[v] == 1) {
          cycle.push_back(e);
          for (std::size_t w = u; w != v; w = pn.edges()[via[w]].from) {
            cycle.push_back(via[w]);
          }
        }
      }
    }
    if (cycle.empty()) break;
    T bottleneck = flow[cycle.front()];
    for (std::size_t e : cycle) {
      if (flow[e] < bottleneck) bottleneck = flow[e];
    }
    for (std::size_t e : cycle) {
      flow[e] = (flow[e] == bottleneck) ? zero : flow[e] - bottleneck;
    }
    ++count;
  }
  if (cancelled != nullptr) *cancelled = count;
  return flow;
}

ProductFlow eliminate_cycles(const ProductNetwork& pn, const ProductFlow& f,
                             std::size_t* cancelled = nullptr);

}  // namespace pcfp
