#include "pcfp/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "pcfp/oracle.hpp"
#include "pcfp/pipeline.hpp"
#include "pcfp/report.hpp"

namespace pcfp {
namespace {

namespace fs = std::filesystem;

fs::path out_dir(const CommandOptions& o) {
  fs::path dir = o.out.empty() ? fs::path("pcfp-out") : fs::path(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "'");
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) throw Error("cannot write '" + path.string() + "'");
}

// Parses and validates; returns false after printing violations.
bool load_valid(const CommandOptions& o, Instance& inst, std::ostream& err) {
  if (o.instance.empty()) throw InvalidArgument("--instance is required");
  inst = load_instance_file(o.instance);
  ValidationReport report = validate_instance(inst);
  if (!report.ok()) {
    err << validation_report_text(report);
    return false;
  }
  return true;
}

template <typename Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace

int run_solve(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Instance inst;
    if (!load_valid(o, inst, err)) return static_cast<int>(kExitValidation);
    PipelineOptions popts{o.eps, o.eps_lp, o.seed};
    PipelineResult r = run_pipeline(inst, popts);
    fs::path dir = out_dir(o);
    write_file(dir / "report.json", solve_report_json(inst, r, popts));
    write_file(dir / "solution.json", solution_dump_json(inst, r));
    std::string summary = solve_summary(inst, r);
    write_file(dir / "summary.txt", summary);
    if (o.dump_product_graphs) {
      write_file(dir / "product_graphs.json", dump_product_networks(inst, r.networks));
    }
    out << summary;
    if (o.strict && r.capacity.any_violation) {
      err << "error: rounded solution violates capacities (strict mode)\n";
      return static_cast<int>(kExitCapacityViolation);
    }
    return static_cast<int>(kExitOk);
  });
}

int run_experiment(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Instance inst;
    if (!load_valid(o, inst, err)) return static_cast<int>(kExitValidation);
    ExperimentOptions eopts{o.eps, o.eps_lp, o.trials, o.seed, o.threads};
    ExperimentReport rep = monte_carlo_experiment(inst, eopts);
    fs::path dir = out_dir(o);
    write_file(dir / "experiment.json", experiment_report_json(rep));
    write_file(dir / "trials.csv", experiment_trials_csv(rep));
    write_file(dir / "timing.json", experiment_timing_json(rep));
    std::string summary = experiment_summary(rep);
    write_file(dir / "summary.txt", summary);
    // Timing stays out of summary.txt so that file is reproducible.
    out << summary << "wall clock solve / rounding (s): " << rep.solve_seconds << " / "
        << rep.rounding_seconds << "\n";
    return static_cast<int>(kExitOk);
  });
}

int run_oracle(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Instance inst;
    if (!load_valid(o, inst, err)) return static_cast<int>(kExitValidation);
    auto networks = build_product_networks(inst);
    IntegralSolution sol = brute_force_integral_opt(inst, networks);
    fs::path dir = out_dir(o);
    write_file(dir / "oracle.json", oracle_report_json(inst, networks, sol));
    out << "optimal integral benefit " << sol.benefit << "\n";
    for (std::size_t i = 0; i < sol.outcomes.size(); ++i) {
      out << "  " << inst.requests()[i].id << ": "
          << (sol.outcomes[i].accepted ? "accepted" : "rejected") << "\n";
    }
    return static_cast<int>(kExitOk);
  });
}

int run_generate(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Instance inst = generate_instance(o.gen, o.seed);
    std::string doc = serialize_instance(inst);
    if (o.out.empty()) {
      out << doc;
    } else {
      fs::path dir = out_dir(o);
      write_file(dir / "instance.json", doc);
      out << "wrote " << (dir / "instance.json").string() << "\n";
    }
    return static_cast<int>(kExitOk);
  });
}

int run_validate(const CommandOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.instance.empty()) throw InvalidArgument("--instance is required");
    Instance inst = load_instance_file(o.instance);
    ValidationReport report = validate_instance(inst);
    out << validation_report_text(report);
    return static_cast<int>(report.ok() ? kExitOk : kExitValidation);
  });
}

}  // namespace pcfp
