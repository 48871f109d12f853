#include "pcfp/report.hpp"

#include <iomanip>
#include <map>
#include <sstream>

#include "json.hpp"

namespace pcfp {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string text(const ordered_json& doc) { return doc.dump(2) + "\n"; }

// Unbounded capacities serialize as null.
ordered_json number(double x) {
  if (std::isinf(x)) return nullptr;
  return x;
}

ordered_json guarantee_json(const GuaranteeReport& g) {
  ordered_json j;
  j["eps"] = g.eps;
  j["c_min_edges"] = number(g.c_min);
  j["c_min_all"] = number(g.c_min_all);
  j["d_max"] = g.d_max;
  j["b_max"] = g.b_max;
  j["delta_max"] = g.delta_max;
  j["edge_count"] = g.edge_count;
  j["condition_lhs"] = number(g.condition_lhs);
  j["condition_rhs"] = g.condition_rhs;
  j["condition_holds"] = g.condition_holds;
  j["capacity_violation_bound"] = g.capacity_violation_bound;
  j["capacity_bound_applicable"] = g.capacity_bound_applicable;
  j["fractional_benefit"] = g.fractional_benefit;
  j["benefit_mu"] = g.benefit_mu;
  j["benefit_tail_bound"] = g.benefit_tail_bound;
  j["unit_benefit"] = g.unit_benefit;
  j["remark"] = g.remark;
  return j;
}

ordered_json capacity_json(const Instance& inst, const CapacityReport& c) {
  auto entries = [](const auto& items, const std::vector<CapacityEntry>& rows) {
    ordered_json arr = ordered_json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      arr.push_back({{"id", items[i].id},
                     {"load", rows[i].load},
                     {"capacity", number(rows[i].capacity)},
                     {"violated", rows[i].violated},
                     {"excess", rows[i].excess}});
    }
    return arr;
  };
  ordered_json j;
  j["any_violation"] = c.any_violation;
  j["max_relative_excess"] = c.max_relative_excess;
  j["edges"] = entries(inst.substrate().edges, c.edges);
  j["nodes"] = entries(inst.substrate().nodes, c.nodes);
  return j;
}

ordered_json step_json(const Instance& inst, const ProductNetwork& pn, std::size_t id) {
  const ProductEdge& e = pn.edges()[id];
  ordered_json j = {{"from", node_label(inst, pn, e.from)},
                    {"to", node_label(inst, pn, e.to)},
                    {"kind", edge_kind_name(e.kind)}};
  if (e.kind == ProductEdgeKind::kRouting) {
    j["edge"] = inst.substrate().edges[e.substrate_edge].id;
  }
  return j;
}

std::string step_key(const std::string& from, const std::string& to,
                     const std::string& kind, const std::string& edge) {
  return from + "|" + to + "|" + kind + "|" + edge;
}

// "a -e1-> b [w1@b] ..." rendering of a projected walk.
std::string walk_text(const Instance& inst, const ProductNetwork& pn,
                      const ProductPath& p) {
  const auto& net = inst.substrate();
  const Request& r = inst.requests()[pn.request()];
  SubstrateWalk w = project_path(pn, p);
  std::string s = net.nodes[w.start].id;
  for (const WalkStep& st : w.steps) {
    if (st.kind == WalkStep::Kind::kRoute) {
      s += " -" + net.edges[st.edge].id + "-> " + net.nodes[st.to].id;
    } else {
      s += " [" + r.graph.vertices[st.pr_vertex] + "@" + net.nodes[st.from].id + "]";
    }
  }
  return s;
}

ordered_json integral_json(const Instance& inst, std::span<const ProductNetwork> networks,
                           const IntegralSolution& sol, bool with_paths) {
  ordered_json accepted = ordered_json::array();
  ordered_json rejected = ordered_json::array();
  ordered_json requests = ordered_json::array();
  for (std::size_t i = 0; i < sol.outcomes.size(); ++i) {
    const RequestOutcome& o = sol.outcomes[i];
    const Request& r = inst.requests()[i];
    (o.accepted ? accepted : rejected).push_back(r.id);
    if (!with_paths) continue;
    ordered_json rj = {{"id", r.id}, {"accepted", o.accepted}};
    if (o.accepted) {
      const ProductNetwork& pn = networks[i];
      ordered_json pr = ordered_json::array();
      for (std::size_t y : realized_pr_path(pn, o.path)) pr.push_back(r.graph.edges[y].id);
      rj["pr_path"] = pr;
      rj["walk"] = walk_text(inst, pn, o.path);
      ordered_json steps = ordered_json::array();
      for (std::size_t id : o.path.edges) steps.push_back(step_json(inst, pn, id));
      rj["path"] = steps;
    }
    requests.push_back(rj);
  }
  ordered_json j;
  j["benefit"] = sol.benefit;
  j["flow_benefit"] = sol.flow_benefit;
  j["accepted"] = accepted;
  j["rejected"] = rejected;
  if (with_paths) j["requests"] = requests;
  return j;
}

// Inverse of guarantee_json; null capacities read back as unbounded.
GuaranteeReport read_guarantee(const json& j) {
  auto real = [&](const char* key) {
    const json& v = j.at(key);
    return v.is_null() ? kUnbounded : v.get<double>();
  };
  GuaranteeReport g;
  g.eps = real("eps");
  g.c_min = real("c_min_edges");
  g.c_min_all = real("c_min_all");
  g.d_max = real("d_max");
  g.b_max = real("b_max");
  g.delta_max = j.at("delta_max").get<int>();
  g.edge_count = j.at("edge_count").get<std::size_t>();
  g.condition_lhs = real("condition_lhs");
  g.condition_rhs = real("condition_rhs");
  g.condition_holds = j.at("condition_holds").get<bool>();
  g.capacity_violation_bound = real("capacity_violation_bound");
  g.capacity_bound_applicable = j.at("capacity_bound_applicable").get<bool>();
  g.fractional_benefit = real("fractional_benefit");
  g.benefit_mu = real("benefit_mu");
  g.benefit_tail_bound = real("benefit_tail_bound");
  g.unit_benefit = j.at("unit_benefit").get<bool>();
  g.remark = j.at("remark").get<std::string>();
  return g;
}

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("solution dump lacks '") + key + "'");
  }
  return j.at(key);
}

std::string fixed(double x, int digits = 6) {
  if (std::isinf(x)) return "inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

}  // namespace

std::string solve_report_json(const Instance& inst, const PipelineResult& r,
                              const PipelineOptions& options) {
  const DerivedScalars& d = inst.scalars();
  ordered_json doc;
  doc["parameters"] = {{"eps", options.eps}, {"eps_lp", options.eps_lp},
                       {"seed", options.seed}};
  doc["instance"] = {{"nodes", inst.substrate().nodes.size()},
                     {"edges", inst.substrate().edges.size()},
                     {"requests", inst.requests().size()},
                     {"c_min_edges", number(d.c_min)},
                     {"c_min_all", number(d.c_min_all)},
                     {"d_max", d.d_max},
                     {"b_max", d.b_max},
                     {"delta_max", d.delta_max}};

  ordered_json unroutable = ordered_json::array();
  ordered_json amounts = ordered_json::object();
  for (std::size_t i = 0; i < inst.requests().size(); ++i) {
    if (!r.networks[i].routable()) unroutable.push_back(inst.requests()[i].id);
  }
  for (const ProductFlow& f : r.fractional.flows) {
    amounts[inst.requests()[f.request].id] = f.amount;
  }
  const SolverStats& st = r.fractional.stats;
  doc["fractional"] = {{"benefit", r.fractional.benefit},
                       {"upper_bound", st.upper_bound},
                       {"stop_reason", st.stop_reason},
                       {"eps_internal", st.eps_internal},
                       {"phases", st.phases},
                       {"augmentations", st.augmentations},
                       {"shortest_paths", st.shortest_paths},
                       {"cycles_cancelled", r.cycles_cancelled},
                       {"amounts", amounts}};
  doc["unroutable"] = unroutable;
  doc["integral"] = integral_json(inst, r.networks, r.integral, false);
  doc["capacity"] = capacity_json(inst, r.capacity);
  doc["guarantee"] = guarantee_json(r.guarantee);
  return text(doc);
}

std::string solution_dump_json(const Instance& inst, const PipelineResult& r) {
  ordered_json flows = ordered_json::array();
  for (const ProductFlow& f : r.fractional.flows) {
    const ProductNetwork& pn = r.networks[f.request];
    ordered_json edges = ordered_json::array();
    for (std::size_t e = 0; e < f.edge_flow.size(); ++e) {
      if (f.edge_flow[e] == 0.0) continue;
      ordered_json s = step_json(inst, pn, e);
      s["flow"] = f.edge_flow[e];
      edges.push_back(s);
    }
    flows.push_back({{"id", inst.requests()[f.request].id},
                     {"amount", f.amount},
                     {"edges", edges}});
  }
  ordered_json load = {{"edges", ordered_json::object()}, {"nodes", ordered_json::object()}};
  const auto& net = r.scaled.substrate();
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    load["edges"][net.edges[e].id] = r.fractional.load.edge[e];
  }
  for (std::size_t v = 0; v < net.nodes.size(); ++v) {
    load["nodes"][net.nodes[v].id] = r.fractional.load.node[v];
  }
  ordered_json doc;
  doc["fractional"] = {{"benefit", r.fractional.benefit}, {"flows", flows}, {"load", load}};
  doc["integral"] = integral_json(inst, r.networks, r.integral, true);
  return text(doc);
}

IntegralSolution read_solution_dump(std::string_view document, const Instance& inst,
                                    std::span<const ProductNetwork> networks) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("solution dump: ") + e.what());
  }
  const json& reqs = member(member(doc, "integral"), "requests");
  if (!reqs.is_array() || reqs.size() != inst.requests().size()) {
    throw ParseError("solution dump does not match the instance requests");
  }
  IntegralSolution sol;
  sol.outcomes.resize(inst.requests().size());
  try {
    for (const json& rj : reqs) {
      const std::string id = member(rj, "id").get<std::string>();
      std::size_t i = inst.request_index(id);
      if (i == kNone) throw ParseError("solution dump names unknown request '" + id + "'");
      RequestOutcome& o = sol.outcomes[i];
      o.path.request = i;
      if (!member(rj, "accepted").get<bool>()) continue;
      const ProductNetwork& pn = networks[i];
      std::map<std::string, std::size_t> lookup;
      for (std::size_t e = 0; e < pn.edges().size(); ++e) {
        const ProductEdge& pe = pn.edges()[e];
        std::string edge = pe.kind == ProductEdgeKind::kRouting
                               ? inst.substrate().edges[pe.substrate_edge].id
                               : "";
        lookup[step_key(node_label(inst, pn, pe.from), node_label(inst, pn, pe.to),
                        edge_kind_name(pe.kind), edge)] = e;
      }
      for (const json& s : member(rj, "path")) {
        std::string edge = s.contains("edge") ? s.at("edge").get<std::string>() : "";
        auto it = lookup.find(step_key(member(s, "from").get<std::string>(),
                                       member(s, "to").get<std::string>(),
                                       member(s, "kind").get<std::string>(), edge));
        if (it == lookup.end()) {
          throw ParseError("solution dump step not in the product network of '" + id + "'");
        }
        o.path.edges.push_back(it->second);
      }
      o.accepted = true;
      sol.benefit += inst.requests()[i].benefit;
      sol.flow_benefit += inst.requests()[i].benefit * inst.requests()[i].demand;
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("solution dump: ") + e.what());
  }
  return sol;
}

std::string solve_summary(const Instance& inst, const PipelineResult& r) {
  const GuaranteeReport& g = r.guarantee;
  std::size_t accepted = 0;
  for (const RequestOutcome& o : r.integral.outcomes) accepted += o.accepted ? 1 : 0;
  std::ostringstream os;
  auto row = [&](const std::string& k, const std::string& v) {
    os << std::left << std::setw(34) << k << v << "\n";
  };
  row("substrate nodes / edges", std::to_string(inst.substrate().nodes.size()) + " / " +
                                     std::to_string(inst.substrate().edges.size()));
  row("requests (accepted)", std::to_string(inst.requests().size()) + " (" +
                                 std::to_string(accepted) + ")");
  row("B(F) scaled capacities", fixed(r.fractional.benefit));
  row("certified upper bound", fixed(r.fractional.stats.upper_bound));
  row("B(ALG) accepted benefits", fixed(r.integral.benefit));
  row("B(ALG) as flow (b_i d_i)", fixed(r.integral.flow_benefit));
  row("capacity violation", r.capacity.any_violation
                                ? "yes (max relative excess " +
                                      fixed(r.capacity.max_relative_excess) + ")"
                                : "no");
  row("condition lhs c_min/(D d_max)", fixed(g.condition_lhs));
  row("condition rhs", fixed(g.condition_rhs));
  row("condition holds", g.condition_holds ? "yes" : "no");
  row("violation bound 1/|E|", fixed(g.capacity_violation_bound));
  row("Pr[B(ALG) < (1-eps) B(F)] <=", fixed(g.benefit_tail_bound));
  if (!g.remark.empty()) row("remark", g.remark);
  return os.str();
}

std::string experiment_report_json(const ExperimentReport& rep) {
  ordered_json doc;
  doc["parameters"] = {{"eps", rep.options.eps},
                       {"eps_lp", rep.options.eps_lp},
                       {"trials", rep.options.trials},
                       {"seed", rep.options.seed}};
  doc["fractional_benefit"] = rep.fractional_benefit;
  doc["reference_benefit"] = rep.reference_benefit;
  doc["benefit_threshold"] = rep.benefit_threshold;
  doc["violation_frequency"] = rep.violation_frequency;
  doc["fraction_meeting_threshold"] = rep.fraction_meeting_threshold;
  doc["fraction_below_threshold"] = 1.0 - rep.fraction_meeting_threshold;
  doc["flow_benefit"] = {{"mean", rep.benefit_mean},     {"stddev", rep.benefit_stddev},
                    {"min", rep.benefit_min},       {"max", rep.benefit_max},
                    {"p05", rep.benefit_p05},       {"median", rep.benefit_median},
                    {"p95", rep.benefit_p95}};
  doc["bounds"] = {{"capacity_violation", rep.guarantee.capacity_violation_bound},
                   {"capacity_bound_applicable", rep.guarantee.capacity_bound_applicable},
                   {"benefit_shortfall", rep.guarantee.benefit_tail_bound}};
  doc["guarantee"] = guarantee_json(rep.guarantee);
  ordered_json trials = ordered_json::array();
  for (const TrialRecord& t : rep.records) {
    trials.push_back({{"trial", t.trial},
                      {"seed", t.seed},
                      {"violated", t.violated},
                      {"benefit", t.benefit},
                      {"flow_benefit", t.flow_benefit},
                      {"accepted", t.accepted},
                      {"max_relative_excess", t.max_relative_excess}});
  }
  doc["trials"] = trials;
  return text(doc);
}

std::string experiment_trials_csv(const ExperimentReport& rep) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "trial,seed,violated,benefit,flow_benefit,accepted,max_relative_excess\n";
  for (const TrialRecord& t : rep.records) {
    os << t.trial << "," << t.seed << "," << (t.violated ? 1 : 0) << "," << t.benefit
       << "," << t.flow_benefit << "," << t.accepted << "," << t.max_relative_excess << "\n";
  }
  return os.str();
}

std::string experiment_summary(const ExperimentReport& rep) {
  const GuaranteeReport& g = rep.guarantee;
  std::ostringstream os;
  auto row = [&](const std::string& k, const std::string& v) {
    os << std::left << std::setw(34) << k << v << "\n";
  };
  row("trials", std::to_string(rep.options.trials));
  row("B(F) scaled capacities", fixed(rep.fractional_benefit));
  row("threshold (1-eps) B(F)", fixed(rep.benefit_threshold));
  row("violation frequency", fixed(rep.violation_frequency));
  row("violation bound 1/|E|", fixed(g.capacity_violation_bound) +
                                   (g.capacity_bound_applicable ? "" : " (condition fails)"));
  row("fraction below threshold", fixed(1.0 - rep.fraction_meeting_threshold));
  row("shortfall bound", fixed(g.benefit_tail_bound));
  row("flow B(ALG) mean / stddev", fixed(rep.benefit_mean) + " / " + fixed(rep.benefit_stddev));
  row("flow B(ALG) min / med / max", fixed(rep.benefit_min) + " / " +
                                       fixed(rep.benefit_median) + " / " +
                                       fixed(rep.benefit_max));
  return os.str();
}

std::string experiment_timing_json(const ExperimentReport& rep) {
  ordered_json doc = {{"solve_seconds", rep.solve_seconds},
                      {"rounding_seconds", rep.rounding_seconds},
                      {"trials", rep.options.trials}};
  return text(doc);
}

ExperimentReport read_experiment_report(std::string_view document) {
  ExperimentReport rep;
  try {
    json doc = json::parse(document);
    const json& p = doc.at("parameters");
    rep.options.eps = p.at("eps").get<double>();
    rep.options.eps_lp = p.at("eps_lp").get<double>();
    rep.options.trials = p.at("trials").get<std::size_t>();
    rep.options.seed = p.at("seed").get<std::uint64_t>();
    rep.fractional_benefit = doc.at("fractional_benefit").get<double>();
    rep.reference_benefit = doc.at("reference_benefit").get<double>();
    rep.benefit_threshold = doc.at("benefit_threshold").get<double>();
    rep.guarantee = read_guarantee(doc.at("guarantee"));
    for (const json& t : doc.at("trials")) {
      TrialRecord rec;
      rec.trial = t.at("trial").get<std::size_t>();
      rec.seed = t.at("seed").get<std::uint64_t>();
      rec.violated = t.at("violated").get<bool>();
      rec.benefit = t.at("benefit").get<double>();
      rec.flow_benefit = t.at("flow_benefit").get<double>();
      rec.accepted = t.at("accepted").get<std::size_t>();
      rec.max_relative_excess = t.at("max_relative_excess").get<double>();
      rep.records.push_back(rec);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("experiment report: ") + e.what());
  }
  aggregate_trials(rep);
  return rep;
}

std::string oracle_report_json(const Instance& inst,
                               std::span<const ProductNetwork> networks,
                               const IntegralSolution& sol) {
  ordered_json doc;
  doc["integral"] = integral_json(inst, networks, sol, true);
  return text(doc);
}

std::string validation_report_text(const ValidationReport& report) {
  std::ostringstream os;
  for (const Violation& v : report.violations) {
    os << "violation: " << v.subject << ": " << v.message << "\n";
  }
  for (const std::string& n : report.notes) os << "note: " << n << "\n";
  os << (report.ok() ? "valid\n" : "invalid\n");
  return os.str();
}

}  // namespace pcfp
