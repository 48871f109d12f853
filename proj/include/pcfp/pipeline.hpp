#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pcfp/analysis.hpp"
#include "pcfp/fractional.hpp"
#include "pcfp/instance.hpp"
#include "pcfp/product_graph.hpp"
#include "pcfp/rounding.hpp"

namespace pcfp {

struct PipelineOptions {
  double eps = 0.5;
  double eps_lp = 0.05;
  std::uint64_t seed = 1;
};

struct PipelineResult {
  Instance scaled;                      // capacities divided by (1 + eps)
  std::vector<ProductNetwork> networks;
  FractionalSolution fractional;        // on scaled capacities, cycle free
  std::size_t cycles_cancelled = 0;
  IntegralSolution integral;
  CapacityReport capacity;              // against the original capacities
  GuaranteeReport guarantee;
};

// Scale, solve, cancel cycles, round, verify, evaluate the guarantee.
PipelineResult run_pipeline(const Instance& inst, const PipelineOptions& options);

// Fractional stage only: scaled instance, networks and cycle-free solution.
PipelineResult solve_relaxation(const Instance& inst, const PipelineOptions& options);

struct ExperimentOptions {
  double eps = 0.5;
  double eps_lp = 0.05;
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;  // base seed + trial index
  bool violated = false;
  double benefit = 0.0;       // sum of b_i over accepted requests
  double flow_benefit = 0.0;  // sum of b_i d_i, comparable with B(F)
  std::size_t accepted = 0;
  double max_relative_excess = 0.0;
};

struct ExperimentReport {
  ExperimentOptions options;
  double fractional_benefit = 0.0;  // B(F) on scaled capacities
  double reference_benefit = 0.0;   // (1 + eps) B(F), stands in for opt_f
  double benefit_threshold = 0.0;   // ((1 - eps) / (1 + eps)) * reference
  GuaranteeReport guarantee;
  std::vector<TrialRecord> records;  // sorted by trial index
  // Threshold fraction and distribution statistics use flow_benefit.
  double violation_frequency = 0.0;
  double fraction_meeting_threshold = 0.0;
  double benefit_mean = 0.0;
  double benefit_stddev = 0.0;
  double benefit_min = 0.0;
  double benefit_max = 0.0;
  double benefit_p05 = 0.0;
  double benefit_median = 0.0;
  double benefit_p95 = 0.0;
  double solve_seconds = 0.0;     // wall clock, not part of the persisted report
  double rounding_seconds = 0.0;  // wall clock, not part of the persisted report
};

// Solves the relaxation once and rounds `trials` times with seeds
// seed + t. Throws InvalidArgument when trials == 0.
ExperimentReport monte_carlo_experiment(const Instance& inst,
                                        const ExperimentOptions& options);

// Recomputes the aggregate fields of a report from its per-trial records.
void aggregate_trials(ExperimentReport& report);

}  // namespace pcfp
