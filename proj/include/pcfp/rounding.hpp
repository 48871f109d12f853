#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "pcfp/fractional.hpp"
#include "pcfp/instance.hpp"
#include "pcfp/product_graph.hpp"

namespace pcfp {

// Stable 64-bit FNV-1a hash of an id.
std::uint64_t stable_hash(std::string_view text);

// Random stream of one request within one rounding run. The stream depends
// only on (seed, request id), so requests are independent of each other and
// of the order in which they are processed.
class RoundingRng {
 public:
  RoundingRng(std::uint64_t seed, std::string_view request_id);
  explicit RoundingRng(std::uint64_t stream_seed);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();

 private:
  std::mt19937_64 engine_;
};

// Acceptance coin: true with probability amount / demand.
// Throws InvalidArgument when amount exceeds the demand or is negative.
bool flip_supply_bit(double amount, double demand, RoundingRng& rng);

struct Step {
  std::size_t edge = kNone;
  std::size_t node = kNone;  // head of `edge`
};

// Walkable view of a cycle-free flow: residue below 1e-12 |f| is pruned and
// edges into nodes that can no longer reach t* are dropped, so a walk from s*
// never dead-ends.
class FlowSupport {
 public:
  // Throws InvalidArgument if the support has a directed cycle or the flow
  // has a nonpositive amount.
  FlowSupport(const ProductNetwork& pn, const ProductFlow& f);

  const ProductNetwork& network() const { return *pn_; }
  double amount() const { return amount_; }
  double flow(std::size_t edge) const { return flow_[edge]; }
  // Support out-edges of a node and their flows.
  const std::vector<std::size_t>& out_edges(std::size_t node) const {
    return out_[node];
  }
  double out_flow(std::size_t node) const { return out_total_[node]; }
  // Running sums of the flows of out_edges(node).
  const std::vector<double>& cumulative(std::size_t node) const {
    return cumulative_[node];
  }

 private:
  const ProductNetwork* pn_;
  double amount_ = 0.0;
  std::vector<double> flow_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<double>> cumulative_;
  std::vector<double> out_total_;
};

// Rolls the dice at `node`: out-edge (node, v) with probability proportional
// to its flow. Throws InvalidArgument if the node has no outgoing support.
Step choose_next_vertex(const FlowSupport& support, std::size_t node,
                        RoundingRng& rng);

// Random walk from s* to t* along the support.
ProductPath assign_path(const FlowSupport& support, RoundingRng& rng);

struct RequestOutcome {
  bool accepted = false;
  ProductPath path;  // empty unless accepted
};

// All-or-nothing, unsplittable solution: each accepted request routes its
// full demand along one simple product path.
struct IntegralSolution {
  std::vector<RequestOutcome> outcomes;  // one per request, instance order
  double benefit = 0.0;       // sum of b_i over accepted requests
  double flow_benefit = 0.0;  // sum of b_i d_i: benefit of the rounded flow
};

// Precomputes the supports of a cycle-free fractional solution once so that
// many independent roundings are cheap.
class Rounder {
 public:
  Rounder(const Instance& inst, std::span<const ProductNetwork> networks,
          const FractionalSolution& sol);

  IntegralSolution round(std::uint64_t seed) const;

 private:
  const Instance* inst_;
  std::span<const ProductNetwork> networks_;
  std::vector<double> amount_;
  std::vector<std::optional<FlowSupport>> supports_;
};

// Coin per request, then a walk for each supplied request. The flows must be
// cycle free (see eliminate_cycles).
IntegralSolution round_solution(const Instance& inst,
                                std::span<const ProductNetwork> networks,
                                const FractionalSolution& sol, std::uint64_t seed);

}  // namespace pcfp
