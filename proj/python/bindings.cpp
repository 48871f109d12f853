#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pcfp/analysis.hpp"
#include "pcfp/errors.hpp"
#include "pcfp/generator.hpp"
#include "pcfp/oracle.hpp"
#include "pcfp/pipeline.hpp"
#include "pcfp/report.hpp"

namespace py = pybind11;
using namespace pcfp;

namespace {

// Documents cross the boundary as JSON text; the Python side decodes them.
std::string solve(const std::string& document, double eps, double eps_lp, std::uint64_t seed) {
  Instance inst = parse_instance(document);
  ValidationReport v = validate_instance(inst);
  if (!v.ok()) throw ValidationError(validation_report_text(v));
  PipelineOptions o{eps, eps_lp, seed};
  PipelineResult r = run_pipeline(inst, o);
  return solve_report_json(inst, r, o);
}

std::string experiment(const std::string& document, double eps, double eps_lp,
                       std::size_t trials, std::uint64_t seed) {
  Instance inst = parse_instance(document);
  ValidationReport v = validate_instance(inst);
  if (!v.ok()) throw ValidationError(validation_report_text(v));
  ExperimentOptions o;
  o.eps = eps;
  o.eps_lp = eps_lp;
  o.trials = trials;
  o.seed = seed;
  ExperimentReport r;
  {
    py::gil_scoped_release release;
    r = monte_carlo_experiment(inst, o);
  }
  return experiment_report_json(r);
}

std::string oracle(const std::string& document) {
  Instance inst = parse_instance(document);
  auto nets = build_product_networks(inst);
  return oracle_report_json(inst, nets, brute_force_integral_opt(inst, nets));
}

std::string generate(const std::string& family, std::size_t size, std::size_t requests,
                     std::size_t stages, double capacity, std::uint64_t seed) {
  GeneratorParams g;
  g.family = parse_family(family);
  g.nodes = size;
  g.rows = size;
  g.cols = size;
  g.requests = requests;
  g.chain_length = stages;
  g.capacity_min = g.capacity_max = capacity;
  return serialize_instance(generate_instance(g, seed));
}

std::vector<std::string> validate(const std::string& document) {
  std::vector<std::string> out;
  for (const Violation& v : validate_instance(parse_instance(document)).violations) {
    out.push_back(v.message);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_pcfp, m) {
  m.doc() = "Randomized rounding for processing-constrained flows";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<LimitError>(m, "LimitError", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());

  m.def("solve", &solve, py::arg("document"), py::arg("eps") = 0.5, py::arg("eps_lp") = 0.05,
        py::arg("seed") = 1);
  m.def("experiment", &experiment, py::arg("document"), py::arg("eps") = 0.5,
        py::arg("eps_lp") = 0.05, py::arg("trials") = 200, py::arg("seed") = 1);
  m.def("oracle", &oracle, py::arg("document"));
  m.def("generate", &generate, py::arg("family") = "grid", py::arg("size") = 4,
        py::arg("requests") = 10, py::arg("stages") = 2, py::arg("capacity") = 10.0,
        py::arg("seed") = 1);
  m.def("validate", &validate, py::arg("document"));
  m.def("beta", &beta);
  m.def("chernoff_upper_tail", &chernoff_upper_tail, py::arg("eps"), py::arg("mu"));
  m.def("chernoff_lower_tail", &chernoff_lower_tail, py::arg("eps"), py::arg("mu"));
}
