#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcfp/instance.hpp"
#include "pcfp/pipeline.hpp"
#include "pcfp/product_graph.hpp"
#include "pcfp/rounding.hpp"

namespace pcfp {

// Run report of `solve` (JSON text). Contains no wall-clock data, so equal
// inputs give byte-identical text.
std::string solve_report_json(const Instance& inst, const PipelineResult& r,
                              const PipelineOptions& options);

// Fractional flows, loads and the rounded paths. Path steps are written as
// node labels plus the substrate edge, so the dump can be read back without
// product-edge indices.
std::string solution_dump_json(const Instance& inst, const PipelineResult& r);

// Reads the integral part of a solution dump back against freshly built
// product networks. Throws ParseError on malformed or mismatching dumps.
IntegralSolution read_solution_dump(std::string_view document, const Instance& inst,
                                    std::span<const ProductNetwork> networks);

// Human-readable table for the terminal and summary.txt.
std::string solve_summary(const Instance& inst, const PipelineResult& r);

std::string experiment_report_json(const ExperimentReport& report);
// Per-trial data columns.
std::string experiment_trials_csv(const ExperimentReport& report);
std::string experiment_summary(const ExperimentReport& report);
std::string experiment_timing_json(const ExperimentReport& report);

// Restores options, thresholds and per-trial records from an experiment
// report and re-aggregates them.
ExperimentReport read_experiment_report(std::string_view document);

std::string oracle_report_json(const Instance& inst,
                               std::span<const ProductNetwork> networks,
                               const IntegralSolution& sol);

std::string validation_report_text(const ValidationReport& report);

}  // namespace pcfp
