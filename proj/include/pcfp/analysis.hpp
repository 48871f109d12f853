#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pcfp/fractional.hpp"
#include "pcfp/instance.hpp"
#include "pcfp/product_graph.hpp"
#include "pcfp/rounding.hpp"

namespace pcfp {

// beta(eps) = (1 + eps) ln(1 + eps) - eps, defined for eps > -1.
double beta(double eps);

// e^{-beta(eps) mu}: bound on Pr[X >= (1 + eps) mu] for sums of independent
// [0, 1] variables with total mean at most mu. Requires eps > 0, mu >= 0.
double chernoff_upper_tail(double eps, double mu);

// e^{-beta(-eps) mu}: bound on Pr[X <= (1 - eps) mu] when the total mean is at
// least mu. Requires 0 <= eps < 1, mu >= 0.
double chernoff_lower_tail(double eps, double mu);

struct GuaranteeReport {
  double eps = 0.0;
  double c_min = 0.0;
  double c_min_all = 0.0;
  double d_max = 0.0;
  double b_max = 0.0;
  int delta_max = 0;
  std::size_t edge_count = 0;
  double condition_lhs = 0.0;  // c_min / (delta_max d_max)
  double condition_rhs = 0.0;  // ((4.2 + eps) / eps^2) (1 + eps) ln |E|
  bool condition_holds = false;
  // 1 / |E|; meaningful only when the condition holds.
  double capacity_violation_bound = 1.0;
  bool capacity_bound_applicable = false;
  double fractional_benefit = 0.0;  // B(F) the bound is evaluated at
  double benefit_mu = 0.0;          // B(F) / (b_max d_max)
  // Bound on Pr[B(ALG) < (1 - eps) B(F)].
  double benefit_tail_bound = 1.0;
  bool unit_benefit = false;  // b_max == 1
  std::string remark;
};

// Evaluates the large-capacity condition and both probability bounds. `inst`
// carries the original capacities; `sol` is the fractional solution computed
// on capacities divided by (1 + eps). Throws InvalidArgument unless
// 0 < eps < 1.
GuaranteeReport theorem_guarantee(const Instance& inst, const FractionalSolution& sol,
                                  double eps);

struct CapacityEntry {
  double load = 0.0;
  double capacity = 0.0;
  bool violated = false;
  double excess = 0.0;  // max(0, load - capacity)
};

struct CapacityReport {
  std::vector<CapacityEntry> edges;  // instance edge order
  std::vector<CapacityEntry> nodes;  // instance node order
  bool any_violation = false;
  double max_relative_excess = 0.0;  // max excess / capacity
};

// Loads are sum_i d_i * multiplicity over accepted paths, checked against the
// capacities of `inst`.
CapacityReport verify_capacities(const Instance& inst,
                                 std::span<const ProductNetwork> networks,
                                 const IntegralSolution& sol);

// Sum of benefits of accepted requests.
double solution_benefit(const Instance& inst, const IntegralSolution& sol);

// Sum of b_i d_i over accepted requests; the benefit of the rounded flow in
// the same units as B(F).
double solution_flow_benefit(const Instance& inst, const IntegralSolution& sol);

}  // namespace pcfp
