#include "pcfp/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

namespace pcfp {
namespace {

double quantile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return 0.0;
  // Nearest-rank on the sorted sample.
  std::size_t rank = static_cast<std::size_t>(std::ceil(q * sorted.size()));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

}  // namespace

PipelineResult solve_relaxation(const Instance& inst, const PipelineOptions& options) {
  PipelineResult r;
  r.scaled = scale_capacities(inst, options.eps);
  r.networks = build_product_networks(inst);
  SolverOptions solver;
  solver.eps_lp = options.eps_lp;
  r.fractional = solve_fractional(r.scaled, r.networks, solver);
  for (ProductFlow& f : r.fractional.flows) {
    std::size_t cancelled = 0;
    f = eliminate_cycles(r.networks[f.request], f, &cancelled);
    r.cycles_cancelled += cancelled;
  }
  r.fractional.load = total_load(r.scaled, r.networks, r.fractional.flows);
  r.guarantee = theorem_guarantee(inst, r.fractional, options.eps);
  return r;
}

PipelineResult run_pipeline(const Instance& inst, const PipelineOptions& options) {
  PipelineResult r = solve_relaxation(inst, options);
  r.integral = round_solution(r.scaled, r.networks, r.fractional, options.seed);
  r.capacity = verify_capacities(inst, r.networks, r.integral);
  return r;
}

void aggregate_trials(ExperimentReport& report) {
  const auto& recs = report.records;
  const double n = static_cast<double>(recs.size());
  std::size_t violations = 0, meeting = 0;
  double sum = 0.0;
  std::vector<double> benefits;
  for (const TrialRecord& t : recs) {
    violations += t.violated ? 1 : 0;
    // Relative slack absorbs rounding in the threshold product.
    if (t.flow_benefit >= report.benefit_threshold * (1.0 - 1e-12)) ++meeting;
    sum += t.flow_benefit;
    benefits.push_back(t.flow_benefit);
  }
  std::sort(benefits.begin(), benefits.end());
  report.violation_frequency = n > 0 ? violations / n : 0.0;
  report.fraction_meeting_threshold = n > 0 ? meeting / n : 0.0;
  report.benefit_mean = n > 0 ? sum / n : 0.0;
  double ss = 0.0;
  for (double b : benefits) ss += (b - report.benefit_mean) * (b - report.benefit_mean);
  report.benefit_stddev = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  report.benefit_min = benefits.empty() ? 0.0 : benefits.front();
  report.benefit_max = benefits.empty() ? 0.0 : benefits.back();
  report.benefit_p05 = quantile(benefits, 0.05);
  report.benefit_median = quantile(benefits, 0.5);
  report.benefit_p95 = quantile(benefits, 0.95);
}

ExperimentReport monte_carlo_experiment(const Instance& inst,
                                        const ExperimentOptions& options) {
  if (options.trials == 0) throw InvalidArgument("trials must be at least 1");
  using Clock = std::chrono::steady_clock;
  ExperimentReport report;
  report.options = options;

  auto t0 = Clock::now();
  PipelineOptions popts;
  popts.eps = options.eps;
  popts.eps_lp = options.eps_lp;
  PipelineResult relax = solve_relaxation(inst, popts);
  auto t1 = Clock::now();

  report.fractional_benefit = relax.fractional.benefit;
  report.reference_benefit = (1.0 + options.eps) * relax.fractional.benefit;
  report.benefit_threshold =
      (1.0 - options.eps) / (1.0 + options.eps) * report.reference_benefit;
  report.guarantee = relax.guarantee;

  const Rounder rounder(relax.scaled, relax.networks, relax.fractional);
  report.records.resize(options.trials);
  auto run_trial = [&](std::size_t t) {
    TrialRecord rec;
    rec.trial = t;
    rec.seed = options.seed + t;
    IntegralSolution sol = rounder.round(rec.seed);
    CapacityReport cap = verify_capacities(inst, relax.networks, sol);
    rec.violated = cap.any_violation;
    rec.max_relative_excess = cap.max_relative_excess;
    rec.benefit = sol.benefit;
    rec.flow_benefit = sol.flow_benefit;
    for (const RequestOutcome& o : sol.outcomes) rec.accepted += o.accepted ? 1 : 0;
    report.records[t] = rec;
  };

  unsigned threads = options.threads != 0 ? options.threads
                                          : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, options.trials));
  if (threads <= 1) {
    for (std::size_t t = 0; t < options.trials; ++t) run_trial(t);
  } else {
    // Strided split; each trial writes only its own slot.
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t t = w; t < options.trials; t += threads) run_trial(t);
      });
    }
  }
  auto t2 = Clock::now();

  aggregate_trials(report);
  report.solve_seconds = std::chrono::duration<double>(t1 - t0).count();
  report.rounding_seconds = std::chrono::duration<double>(t2 - t1).count();
  return report;
}

}  // namespace pcfp
