#include "pcfp/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace pcfp {
namespace {

// Absolute tolerance before a load counts as exceeding its capacity.
constexpr double kLoadSlack = 1e-9;

CapacityEntry entry(double load, double capacity) {
  CapacityEntry c;
  c.load = load;
  c.capacity = capacity;
  c.violated = load > capacity + kLoadSlack;
  c.excess = std::max(0.0, load - capacity);
  return c;
}

}  // namespace

double beta(double eps) {
  if (!(eps > -1.0)) throw InvalidArgument("beta is defined for eps > -1");
  return (1.0 + eps) * std::log1p(eps) - eps;
}

double chernoff_upper_tail(double eps, double mu) {
  if (!(eps > 0.0) || !(mu >= 0.0)) {
    throw InvalidArgument("chernoff_upper_tail needs eps > 0 and mu >= 0");
  }
  return std::clamp(std::exp(-beta(eps) * mu), 0.0, 1.0);
}

double chernoff_lower_tail(double eps, double mu) {
  if (!(eps >= 0.0 && eps < 1.0) || !(mu >= 0.0)) {
    throw InvalidArgument("chernoff_lower_tail needs 0 <= eps < 1 and mu >= 0");
  }
  return std::clamp(std::exp(-beta(-eps) * mu), 0.0, 1.0);
}

GuaranteeReport theorem_guarantee(const Instance& inst, const FractionalSolution& sol,
                                  double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw InvalidArgument("eps must lie in the open interval (0, 1)");
  }
  const DerivedScalars& d = inst.scalars();
  GuaranteeReport g;
  g.eps = eps;
  g.c_min = d.c_min;
  g.c_min_all = d.c_min_all;
  g.d_max = d.d_max;
  g.b_max = d.b_max;
  g.delta_max = d.delta_max;
  g.edge_count = d.edge_count;

  const double scale = static_cast<double>(d.delta_max) * d.d_max;
  g.condition_lhs = scale > 0.0 ? d.c_min / scale : kUnbounded;
  if (d.edge_count == 0) {
    // Nothing can be violated without edges.
    g.condition_rhs = 0.0;
    g.condition_holds = true;
    g.capacity_violation_bound = 0.0;
  } else {
    g.condition_rhs = ((4.2 + eps) / (eps * eps)) * (1.0 + eps) *
                      std::log(static_cast<double>(d.edge_count));
    g.condition_holds = g.condition_lhs >= g.condition_rhs;
    g.capacity_violation_bound = 1.0 / static_cast<double>(d.edge_count);
  }
  g.capacity_bound_applicable = g.condition_holds;

  g.fractional_benefit = sol.benefit;
  const double norm = d.b_max * d.d_max;
  g.benefit_mu = norm > 0.0 ? sol.benefit / norm : 0.0;
  g.benefit_tail_bound = chernoff_lower_tail(eps, g.benefit_mu);

  g.unit_benefit = !inst.requests().empty() && d.b_max == 1.0;
  if (g.unit_benefit && sol.benefit > d.c_min) {
    g.remark =
        "unit benefits with B(F) > c_min: the benefit bound strengthens to "
        "1 - 1/poly(|E|) under the capacity condition";
  } else if (g.unit_benefit) {
    g.remark = "unit benefits";
  }
  return g;
}

CapacityReport verify_capacities(const Instance& inst,
                                 std::span<const ProductNetwork> networks,
                                 const IntegralSolution& sol) {
  const auto& net = inst.substrate();
  std::vector<double> edge_load(net.edges.size(), 0.0);
  std::vector<double> node_load(net.nodes.size(), 0.0);
  for (std::size_t i = 0; i < sol.outcomes.size(); ++i) {
    const RequestOutcome& o = sol.outcomes[i];
    if (!o.accepted) continue;
    const ProductNetwork& pn = networks[i];
    const double demand = inst.requests()[i].demand;
    // Counting edge by edge is sum_i d_i * multiplicity(x, p_i).
    for (std::size_t id : o.path.edges) {
      const ProductEdge& e = pn.edges().at(id);
      if (e.kind == ProductEdgeKind::kRouting) {
        edge_load[e.substrate_edge] += demand;
      } else if (e.kind == ProductEdgeKind::kProcessing) {
        node_load[e.substrate_node] += demand;
      }
    }
  }
  CapacityReport report;
  auto account = [&](const CapacityEntry& c) {
    if (c.violated) {
      report.any_violation = true;
      report.max_relative_excess =
          std::max(report.max_relative_excess, c.excess / c.capacity);
    }
  };
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    report.edges.push_back(entry(edge_load[e], net.edges[e].capacity));
    account(report.edges.back());
  }
  for (std::size_t v = 0; v < net.nodes.size(); ++v) {
    report.nodes.push_back(entry(node_load[v], net.nodes[v].capacity));
    account(report.nodes.back());
  }
  return report;
}

double solution_benefit(const Instance& inst, const IntegralSolution& sol) {
  double b = 0.0;
  for (std::size_t i = 0; i < sol.outcomes.size(); ++i) {
    if (sol.outcomes[i].accepted) b += inst.requests()[i].benefit;
  }
  return b;
}

double solution_flow_benefit(const Instance& inst, const IntegralSolution& sol) {
  double b = 0.0;
  for (std::size_t i = 0; i < sol.outcomes.size(); ++i) {
    const Request& r = inst.requests()[i];
    if (sol.outcomes[i].accepted) b += r.benefit * r.demand;
  }
  return b;
}

}  // namespace pcfp
