#include "doctest.h"

#include <boost/rational.hpp>

#include <random>

#include "fixtures.hpp"
#include "oracles/path_lp.hpp"
#include "pcfp/fractional.hpp"
#include "pcfp/generator.hpp"

using namespace pcfp;

namespace {

using Q = boost::rational<long long>;

void check_feasible(const Instance& inst, const std::vector<ProductNetwork>& nets,
                    const FractionalSolution& sol) {
  const auto& net = inst.substrate();
  SubstrateLoad load = total_load(inst, nets, sol.flows);
  for (std::size_t e = 0; e < net.edges.size(); ++e) {
    CHECK(load.edge[e] <= net.edges[e].capacity + 1e-9);
  }
  for (std::size_t v = 0; v < net.nodes.size(); ++v) {
    CHECK(load.node[v] <= net.nodes[v].capacity + 1e-9);
  }
  double b = 0.0;
  for (const ProductFlow& f : sol.flows) {
    const ProductNetwork& pn = nets[f.request];
    CHECK(f.amount <= inst.requests()[f.request].demand * (1 + 1e-12));
    CHECK(f.amount == doctest::Approx(flow_amount(pn, f.edge_flow)).epsilon(1e-12));
    CHECK(conservation_error(pn, f.edge_flow) <= 1e-9 * std::max(1.0, f.amount));
    for (double x : f.edge_flow) CHECK(x >= 0.0);
    b += inst.requests()[f.request].benefit * f.amount;
  }
  CHECK(sol.benefit == doctest::Approx(b).epsilon(1e-12));
  CHECK(fractional_benefit(inst, sol) == doctest::Approx(b).epsilon(1e-12));
}

}  // namespace

TEST_CASE("scale_capacities") {
  Instance inst(fx::substrate({"a", "b"}, {{"e1", "a", "b", 3}}), {});
  Instance scaled = scale_capacities(inst, 0.5);
  CHECK(scaled.substrate().edges[0].capacity == doctest::Approx(2.0));
  CHECK(std::isinf(scaled.substrate().nodes[0].capacity));
  CHECK(inst.substrate().edges[0].capacity == 3.0);
  CHECK_THROWS_AS(scale_capacities(inst, 0.0), InvalidArgument);
  CHECK_THROWS_AS(scale_capacities(inst, 1.0), InvalidArgument);
}

TEST_CASE("uncontended demand-bounded request") {
  Instance inst(fx::substrate({"a", "b"}, {{"e1", "a", "b", 5}}), {fx::routing("r", 3, 2)});
  auto nets = build_product_networks(inst);
  FractionalSolution sol = solve_fractional(inst, nets);
  check_feasible(inst, nets, sol);
  CHECK(sol.flows[0].amount >= 3 * (1 - 0.05));
  CHECK(sol.benefit >= 6 * (1 - 0.05));
  CHECK(sol.benefit <= 6 + 1e-9);
  CHECK(sol.stats.upper_bound >= sol.benefit);
}

TEST_CASE("two routing requests on one unit edge") {
  Instance inst = fx::contention();
  auto nets = build_product_networks(inst);
  SolverOptions opts;
  opts.eps_lp = 0.1;
  FractionalSolution sol = solve_fractional(inst, nets, opts);
  check_feasible(inst, nets, sol);
  CHECK(sol.benefit >= 1.8);
  CHECK(sol.benefit <= 2.0 + 1e-9);
  REQUIRE(oracle::path_lp_optimum(inst, nets).has_value());
  CHECK(*oracle::path_lp_optimum(inst, nets) == doctest::Approx(2.0));
}

TEST_CASE("disconnected request gets no flow") {
  auto net = fx::substrate({"a", "b", "c"}, {{"e1", "a", "b", 1}});
  Instance inst(net, {fx::chain("r", 1, 1, {{"a"}, {"c"}, {"b"}}, {{"e1"}, {"e1"}}),
                      fx::routing("q", 1, 1)});
  auto nets = build_product_networks(inst);
  FractionalSolution sol = solve_fractional(inst, nets);
  CHECK(sol.flows[inst.request_index("r")].amount == 0.0);
  CHECK(sol.flows[inst.request_index("q")].amount > 0.9);

  Instance only(net, {fx::chain("r", 1, 1, {{"a"}, {"c"}, {"b"}}, {{"e1"}, {"e1"}})});
  auto only_nets = build_product_networks(only);
  FractionalSolution zero = solve_fractional(only, only_nets);
  CHECK(zero.benefit == 0.0);
  CHECK(zero.flows.size() == 1);
}

TEST_CASE("node capacities bound processing") {
  auto net = fx::substrate({"a", "b"}, {{"e1", "a", "b", 10}});
  net.nodes[1].capacity = 1.5;
  Instance inst(net, {fx::chain("r1", 1, 1, {{"a"}, {"b"}, {"a"}}, {{"e1"}, {"e1"}}),
                      fx::chain("r2", 1, 1, {{"a"}, {"b"}, {"a"}}, {{"e1"}, {"e1"}})});
  auto nets = build_product_networks(inst);
  FractionalSolution sol = solve_fractional(inst, nets);
  check_feasible(inst, nets, sol);
  CHECK(sol.benefit >= 1.5 * 0.95);
}

TEST_CASE("solver matches the exact path LP within eps_lp") {
  std::size_t compared = 0;
  for (std::uint64_t seed = 1; seed <= 60 && compared < 25; ++seed) {
    GeneratorParams g;
    g.family = seed % 3 == 0 ? SubstrateFamily::kRandom : SubstrateFamily::kPath;
    g.nodes = 3;
    g.requests = 1 + seed % 3;
    g.chain_length = seed % 2;
    g.capacity_min = 0.5;
    g.capacity_max = 2.5;
    g.demand_min = 0.5;
    g.demand_max = 2;
    g.benefit_min = 1;
    g.benefit_max = 3;
    if (seed % 4 == 0) {
      g.node_capacity_min = 0.5;
      g.node_capacity_max = 2;
    }
    Instance inst = generate_instance(g, seed);
    auto nets = build_product_networks(inst);
    auto exact = oracle::path_lp_optimum(inst, nets);
    if (!exact) continue;
    FractionalSolution sol = solve_fractional(inst, nets);
    check_feasible(inst, nets, sol);
    CHECK(sol.benefit >= (1 - 0.05) * *exact - 1e-9);
    CHECK(sol.benefit <= *exact + 1e-7);
    CHECK(sol.stats.upper_bound >= *exact * (1 - 1e-9));
    ++compared;
  }
  CHECK(compared >= 20);
}

TEST_CASE("project_flow and benefit") {
  Instance inst = fx::two_layer();
  auto nets = build_product_networks(inst);
  const ProductNetwork& pn = nets[0];
  ProductFlow f{0, std::vector<double>(pn.edges().size(), 0.0), 1.0};
  const std::size_t a1 = fx::node(inst, pn, "a", 0), b1 = fx::node(inst, pn, "b", 0);
  const std::size_t a2 = fx::node(inst, pn, "a", 1), b2 = fx::node(inst, pn, "b", 1);
  for (auto [u, v] : {std::pair{std::size_t{0}, a1}, std::pair{a1, b1}, std::pair{b1, b2},
                      std::pair{b2, a2}, std::pair{a2, std::size_t{1}}}) {
    f.edge_flow[fx::find_edge(pn, u, v)] = 1.0;
  }
  SubstrateLoad load = project_flow(inst, pn, f);
  CHECK(load.edge[inst.edge_index("e1")] == 2.0);
  CHECK(load.node[inst.node_index("b")] == 1.0);
  CHECK(load.node[inst.node_index("a")] == 0.0);

  ProductFlow zero{0, std::vector<double>(pn.edges().size(), 0.0), 0.0};
  SubstrateLoad none = project_flow(inst, pn, zero);
  CHECK(none.edge[0] == 0.0);

  ProductFlow halves = zero;
  halves.edge_flow[fx::find_edge(pn, a1, b1)] = 0.5;
  halves.edge_flow[fx::find_edge(pn, b2, a2)] = 0.5;
  CHECK(project_flow(inst, pn, halves).edge[0] == 1.0);

  FractionalSolution empty;
  CHECK(fractional_benefit(inst, empty) == 0.0);
  FractionalSolution one;
  one.flows.push_back({0, {}, 3.0});
  Instance b2inst = fx::two_layer(10, 3, 2);
  CHECK(fractional_benefit(b2inst, one) == 6.0);
  Instance pair = fx::contention();
  FractionalSolution both;
  both.flows = {{0, {}, 1.0}, {1, {}, 1.0}};
  CHECK(fractional_benefit(pair, both) == 3.0);
}

TEST_CASE("cycle elimination") {
  Instance inst = fx::two_layer();
  auto nets = build_product_networks(inst);
  const ProductNetwork& pn = nets[0];
  const std::size_t a1 = fx::node(inst, pn, "a", 0), b1 = fx::node(inst, pn, "b", 0);
  const std::size_t a2 = fx::node(inst, pn, "a", 1), b2 = fx::node(inst, pn, "b", 1);
  std::vector<Q> base(pn.edges().size(), Q(0));
  for (auto [u, v] : {std::pair{std::size_t{0}, a1}, std::pair{a1, b1}, std::pair{b1, b2},
                      std::pair{b2, a2}, std::pair{a2, std::size_t{1}}}) {
    base[fx::find_edge(pn, u, v)] = Q(1);
  }

  SUBCASE("acyclic input is a fixed point") {
    std::size_t n = 7;
    CHECK(cancel_flow_cycles(pn, base, &n) == base);
    CHECK(n == 0);
  }
  SUBCASE("two-node cycle carrying one half") {
    std::vector<Q> cyc = base;
    cyc[fx::find_edge(pn, a2, b2)] += Q(1, 2);
    cyc[fx::find_edge(pn, b2, a2)] += Q(1, 2);
    std::size_t n = 0;
    std::vector<Q> out = cancel_flow_cycles(pn, cyc, &n);
    CHECK(n == 1);
    CHECK(out == base);
    for (std::size_t e = 0; e < out.size(); ++e) CHECK(out[e] <= cyc[e]);
  }
  SUBCASE("zero flow") {
    std::vector<Q> zero(pn.edges().size(), Q(0));
    CHECK(cancel_flow_cycles(pn, zero) == zero);
  }
  SUBCASE("random circulations on top of a path flow") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Q> f = base;
      for (std::size_t y = 0; y < 2; ++y) {
        std::size_t u = fx::node(inst, pn, "a", y), v = fx::node(inst, pn, "b", y);
        Q c(static_cast<long long>(rng() % 7), 1 + static_cast<long long>(rng() % 5));
        f[fx::find_edge(pn, u, v)] += c;
        f[fx::find_edge(pn, v, u)] += c;
      }
      std::vector<Q> out = cancel_flow_cycles(pn, f);
      Q in_amount(0), out_amount(0);
      for (std::size_t e : pn.out_edges(0)) {
        in_amount += f[e];
        out_amount += out[e];
      }
      CHECK(in_amount == out_amount);
      for (std::size_t e = 0; e < out.size(); ++e) CHECK(out[e] <= f[e]);
      CHECK(cancel_flow_cycles(pn, out) == out);
    }
  }
  SUBCASE("double version keeps the amount") {
    ProductFlow f{0, std::vector<double>(pn.edges().size(), 0.0), 1.0};
    for (std::size_t e = 0; e < base.size(); ++e) f.edge_flow[e] = boost::rational_cast<double>(base[e]);
    f.edge_flow[fx::find_edge(pn, a1, b1)] += 0.25;
    f.edge_flow[fx::find_edge(pn, b1, a1)] += 0.25;
    std::size_t n = 0;
    ProductFlow g = eliminate_cycles(pn, f, &n);
    CHECK(n == 1);
    CHECK(g.amount == f.amount);
    CHECK(flow_amount(pn, g.edge_flow) == 1.0);
  }
}
