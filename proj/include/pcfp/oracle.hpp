#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pcfp/instance.hpp"
#include "pcfp/product_graph.hpp"
#include "pcfp/rounding.hpp"

namespace pcfp {

struct OracleLimits {
  std::size_t max_requests = 3;
  std::size_t max_product_nodes = 12;
  std::size_t max_path_edges = 12;
};

// Every simple s*-to-t* path of pn, in depth-first order over out_edges.
// Throws LimitError when a path longer than max_edges turns up.
std::vector<ProductPath> enumerate_realizations(const ProductNetwork& pn,
                                                std::size_t max_edges);

// Exact integral optimum by exhaustive search over reject-or-path choices per
// request. Among optimal assignments the lexicographically first one wins
// (reject before paths, paths in enumeration order, requests in instance
// order). Throws LimitError naming the exceeded limit.
IntegralSolution brute_force_integral_opt(const Instance& inst,
                                          std::span<const ProductNetwork> networks,
                                          const OracleLimits& limits = {});

}  // namespace pcfp
