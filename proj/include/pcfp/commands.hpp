#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "pcfp/generator.hpp"

namespace pcfp {

struct CommandOptions {
  std::string instance;  // input path
  std::string out;       // output directory; empty means "pcfp-out" (gen: stdout)
  double eps = 0.5;
  double eps_lp = 0.05;
  std::uint64_t seed = 1;
  std::size_t trials = 200;
  bool strict = false;
  bool dump_product_graphs = false;
  unsigned threads = 0;
  GeneratorParams gen;
};

// Each command returns a process exit code and never throws; diagnostics go
// to `err`, summaries to `out`.
int run_solve(const CommandOptions& options, std::ostream& out, std::ostream& err);
int run_experiment(const CommandOptions& options, std::ostream& out, std::ostream& err);
int run_oracle(const CommandOptions& options, std::ostream& out, std::ostream& err);
int run_generate(const CommandOptions& options, std::ostream& out, std::ostream& err);
int run_validate(const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace pcfp
