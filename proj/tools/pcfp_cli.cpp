#include <iostream>

#include "CLI11.hpp"
#include "pcfp/commands.hpp"
#include "pcfp/errors.hpp"

namespace {

void common_flags(CLI::App* cmd, pcfp::CommandOptions& o) {
  cmd->add_option("--instance", o.instance, "Instance file (JSON)");
  cmd->add_option("--eps", o.eps, "Rounding slack eps in (0,1)")->capture_default_str();
  cmd->add_option("--eps-lp", o.eps_lp, "Fractional solver accuracy")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  cmd->add_option("--out", o.out, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  pcfp::CommandOptions o;
  std::string family = "grid";

  CLI::App app{"pcfp: path computation and function placement solver"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Solve, round and verify one instance");
  common_flags(solve, o);
  solve->add_flag("--strict", o.strict, "Exit 6 when the rounded solution violates capacities");
  solve->add_flag("--dump-product-graphs", o.dump_product_graphs,
                  "Write product_graphs.json");

  auto* experiment = app.add_subcommand("experiment", "Monte Carlo rounding experiment");
  common_flags(experiment, o);
  experiment->add_option("--trials", o.trials, "Number of rounding trials")
      ->capture_default_str();
  experiment->add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  auto* oracle = app.add_subcommand("oracle", "Exact integral optimum of a tiny instance");
  common_flags(oracle, o);

  auto* gen = app.add_subcommand("gen", "Generate an instance");
  gen->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  gen->add_option("--out", o.out, "Output directory (default: stdout)");
  gen->add_option("--family", family, "path, grid or random")->capture_default_str();
  gen->add_option("--nodes", o.gen.nodes, "Nodes (path, random)")->capture_default_str();
  gen->add_option("--rows", o.gen.rows, "Grid rows")->capture_default_str();
  gen->add_option("--cols", o.gen.cols, "Grid columns")->capture_default_str();
  gen->add_option("--extra-edge-prob", o.gen.extra_edge_probability,
                  "Random family: probability of each extra edge")->capture_default_str();
  gen->add_option("--cap-min", o.gen.capacity_min)->capture_default_str();
  gen->add_option("--cap-max", o.gen.capacity_max)->capture_default_str();
  gen->add_option("--node-cap-min", o.gen.node_capacity_min)->capture_default_str();
  gen->add_option("--node-cap-max", o.gen.node_capacity_max,
                  "0 leaves nodes unbounded")->capture_default_str();
  gen->add_option("--requests", o.gen.requests)->capture_default_str();
  gen->add_option("--stages", o.gen.chain_length, "Chain length k")->capture_default_str();
  gen->add_option("--demand-min", o.gen.demand_min)->capture_default_str();
  gen->add_option("--demand-max", o.gen.demand_max)->capture_default_str();
  gen->add_option("--benefit-min", o.gen.benefit_min)->capture_default_str();
  gen->add_option("--benefit-max", o.gen.benefit_max)->capture_default_str();
  gen->add_option("--stage-node-fraction", o.gen.stage_node_fraction)->capture_default_str();
  gen->add_option("--edge-fraction", o.gen.edge_fraction)->capture_default_str();
  gen->add_flag("--integral", o.gen.integral, "Round drawn values to integers");

  auto* validate = app.add_subcommand("validate", "Check an instance file");
  validate->add_option("--instance", o.instance, "Instance file (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : pcfp::kExitUsage;
  }

  if (*solve) return pcfp::run_solve(o, std::cout, std::cerr);
  if (*experiment) return pcfp::run_experiment(o, std::cout, std::cerr);
  if (*oracle) return pcfp::run_oracle(o, std::cout, std::cerr);
  if (*validate) return pcfp::run_validate(o, std::cout, std::cerr);
  try {
    o.gen.family = pcfp::parse_family(family);
  } catch (const pcfp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  }
  return pcfp::run_generate(o, std::cout, std::cerr);
}
