#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "pcfp/instance.hpp"

namespace pcfp {

enum class SubstrateFamily { kPath, kGrid, kRandom };

SubstrateFamily parse_family(const std::string& name);
const char* family_name(SubstrateFamily family);

struct GeneratorParams {
  SubstrateFamily family = SubstrateFamily::kGrid;
  std::size_t nodes = 8;   // path and random families
  std::size_t rows = 4;    // grid family
  std::size_t cols = 4;
  double extra_edge_probability = 0.2;  // random family, on top of a spanning tree
  double capacity_min = 10.0;
  double capacity_max = 10.0;
  // Node capacities are drawn only when node_capacity_max > 0; otherwise
  // nodes are unbounded.
  double node_capacity_min = 0.0;
  double node_capacity_max = 0.0;
  std::size_t requests = 10;
  std::size_t chain_length = 2;  // k processing stages
  double demand_min = 1.0;
  double demand_max = 1.0;
  double benefit_min = 1.0;
  double benefit_max = 1.0;
  // Share of substrate nodes allowed per processing stage and of substrate
  // edges allowed per pr-edge; at least one of each is always kept.
  double stage_node_fraction = 0.5;
  double edge_fraction = 1.0;
  // Round drawn capacities, demands and benefits to integers.
  bool integral = false;
};

// Deterministic in (params, seed). Requests are chains s -> w1 -> ... -> wk -> t
// with pr-edges y0..yk; s and t are pinned to two distinct random substrate
// nodes when there are at least two. Throws InvalidArgument on inconsistent
// parameters.
Instance generate_instance(const GeneratorParams& params, std::uint64_t seed);

}  // namespace pcfp
