#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "fixtures.hpp"
#include "pcfp/analysis.hpp"
#include "pcfp/pipeline.hpp"
#include "pcfp/rounding.hpp"

using namespace pcfp;

namespace {

constexpr int kTrials = 100000;

// Network a -> {b, c, d} used to exercise the dice directly.
struct Fan {
  Instance inst;
  std::vector<ProductNetwork> nets;
  Fan() {
    auto net = fx::substrate({"a", "b", "c", "d", "z"}, {{"eab", "a", "b", 1},
                                                         {"eac", "a", "c", 1},
                                                         {"ead", "a", "d", 1},
                                                         {"ebz", "b", "z", 1},
                                                         {"ecz", "c", "z", 1},
                                                         {"edz", "d", "z", 1}});
    inst = Instance(net, {fx::routing("r", 4, 1, "a", "z",
                                      {"eab", "eac", "ead", "ebz", "ecz", "edz"})});
    nets = build_product_networks(inst);
  }
  ProductFlow flow(double b, double c, double d) const {
    const ProductNetwork& pn = nets[0];
    ProductFlow f{0, std::vector<double>(pn.edges().size(), 0.0), b + c + d};
    auto at = [&](const char* v) { return fx::node(inst, pn, v, 0); };
    f.edge_flow[fx::find_edge(pn, 0, at("a"))] = b + c + d;
    std::pair<const char*, double> legs[] = {{"b", b}, {"c", c}, {"d", d}};
    for (auto [v, x] : legs) {
      f.edge_flow[fx::find_edge(pn, at("a"), at(v))] = x;
      f.edge_flow[fx::find_edge(pn, at(v), at("z"))] = x;
    }
    f.edge_flow[fx::find_edge(pn, at("z"), 1)] = b + c + d;
    return f;
  }
};

}  // namespace

TEST_CASE("rng streams depend only on seed and request id") {
  RoundingRng a(9, "r1"), b(9, "r1"), c(9, "r2"), d(10, "r1");
  double xa = a.uniform();
  CHECK(xa == b.uniform());
  CHECK(xa != c.uniform());
  CHECK(xa != d.uniform());
  for (int i = 0; i < 1000; ++i) {
    double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("flip_supply_bit") {
  RoundingRng rng(1, "r");
  for (int i = 0; i < 1000; ++i) {
    CHECK(flip_supply_bit(2.0, 2.0, rng));
    CHECK(!flip_supply_bit(0.0, 2.0, rng));
  }
  int hits = 0;
  for (int i = 0; i < kTrials; ++i) hits += flip_supply_bit(0.3, 1.0, rng);
  CHECK(std::abs(static_cast<double>(hits) / kTrials - 0.3) <= 0.01);
  CHECK_THROWS_AS(flip_supply_bit(1.5, 1.0, rng), InvalidArgument);
  CHECK_THROWS_AS(flip_supply_bit(-0.5, 1.0, rng), InvalidArgument);
}

TEST_CASE("choose_next_vertex follows the flow split") {
  Fan fan;
  const ProductNetwork& pn = fan.nets[0];
  const std::size_t a = fx::node(fan.inst, pn, "a", 0);

  SUBCASE("single out-edge") {
    FlowSupport s(pn, fan.flow(1, 0, 0));
    RoundingRng rng(3);
    for (int i = 0; i < 100; ++i) {
      CHECK(choose_next_vertex(s, a, rng).node == fx::node(fan.inst, pn, "b", 0));
    }
  }
  SUBCASE("0.75 / 0.25") {
    FlowSupport s(pn, fan.flow(0.75, 0.25, 0));
    RoundingRng rng(4);
    int b = 0;
    for (int i = 0; i < kTrials; ++i) {
      b += choose_next_vertex(s, a, rng).node == fx::node(fan.inst, pn, "b", 0);
    }
    CHECK(std::abs(static_cast<double>(b) / kTrials - 0.75) <= 0.01);
  }
  SUBCASE("1 / 1 / 2") {
    FlowSupport s(pn, fan.flow(1, 1, 2));
    RoundingRng rng(5);
    std::map<std::size_t, int> hits;
    for (int i = 0; i < kTrials; ++i) ++hits[choose_next_vertex(s, a, rng).node];
    CHECK(std::abs(hits[fx::node(fan.inst, pn, "b", 0)] / double(kTrials) - 0.25) <= 0.01);
    CHECK(std::abs(hits[fx::node(fan.inst, pn, "c", 0)] / double(kTrials) - 0.25) <= 0.01);
    CHECK(std::abs(hits[fx::node(fan.inst, pn, "d", 0)] / double(kTrials) - 0.5) <= 0.01);
  }
  SUBCASE("no support out of a node") {
    FlowSupport s(pn, fan.flow(1, 0, 0));
    RoundingRng rng(6);
    CHECK_THROWS_AS(choose_next_vertex(s, fx::node(fan.inst, pn, "c", 0), rng), InvalidArgument);
    CHECK_THROWS_AS(choose_next_vertex(s, ProductNetwork::kSuperSink, rng), InvalidArgument);
  }
}

TEST_CASE("assign_path") {
  Fan fan;
  const ProductNetwork& pn = fan.nets[0];
  SUBCASE("single path support") {
    ProductFlow f = fan.flow(0, 2, 0);
    FlowSupport s(pn, f);
    RoundingRng rng(8);
    ProductPath first = assign_path(s, rng);
    CHECK(is_valid_realization(pn, first));
    for (int i = 0; i < 100; ++i) CHECK(assign_path(s, rng) == first);
  }
  SUBCASE("50 / 50 over disjoint paths") {
    FlowSupport s(pn, fan.flow(1, 1, 0));
    RoundingRng rng(9);
    int via_b = 0;
    const std::size_t b = fx::node(fan.inst, pn, "b", 0);
    for (int i = 0; i < kTrials; ++i) {
      ProductPath p = assign_path(s, rng);
      via_b += pn.edges()[p.edges[1]].to == b;
    }
    CHECK(std::abs(via_b / double(kTrials) - 0.5) <= 0.01);
  }
  SUBCASE("cyclic support is rejected") {
    ProductFlow f = fan.flow(1, 0, 0);
    auto at = [&](const char* v) { return fx::node(fan.inst, pn, v, 0); };
    f.edge_flow[fx::find_edge(pn, at("b"), at("a"))] = 0.5;
    f.edge_flow[fx::find_edge(pn, at("a"), at("b"))] += 0.5;
    CHECK_THROWS_AS(FlowSupport(pn, f), InvalidArgument);
  }
  SUBCASE("tiny residue is pruned") {
    ProductFlow f = fan.flow(1, 1e-15, 0);
    FlowSupport s(pn, f);
    CHECK(s.out_edges(fx::node(fan.inst, pn, "a", 0)).size() == 1);
  }
}

TEST_CASE("round_solution") {
  SUBCASE("zero flows accept nothing") {
    Instance inst = fx::contention();
    auto nets = build_product_networks(inst);
    FractionalSolution sol;
    for (std::size_t i = 0; i < 2; ++i) {
      sol.flows.push_back({i, std::vector<double>(nets[i].edges().size(), 0.0), 0.0});
    }
    IntegralSolution out = round_solution(inst, nets, sol, 1);
    CHECK(out.benefit == 0.0);
    for (const RequestOutcome& o : out.outcomes) CHECK(!o.accepted);
  }
  SUBCASE("saturated single paths are all accepted") {
    Instance inst = fx::three_layer();
    auto nets = build_product_networks(inst);
    FractionalSolution sol;
    ProductFlow f = fx::three_layer_flow(inst, nets[0]);
    for (double& x : f.edge_flow) x = x > 0 ? 1.0 : 0.0;
    f.edge_flow[fx::find_edge(nets[0], fx::node(inst, nets[0], "a", 0),
                              fx::node(inst, nets[0], "c", 0))] = 0.0;
    f.edge_flow[fx::find_edge(nets[0], fx::node(inst, nets[0], "c", 0),
                              fx::node(inst, nets[0], "c", 1))] = 0.0;
    f.edge_flow[fx::find_edge(nets[0], fx::node(inst, nets[0], "c", 1),
                              fx::node(inst, nets[0], "d", 1))] = 0.0;
    f.amount = 1.0;
    sol.flows.push_back(f);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      IntegralSolution out = round_solution(inst, nets, sol, seed);
      REQUIRE(out.outcomes[0].accepted);
      CHECK(is_valid_realization(nets[0], out.outcomes[0].path));
      CHECK(multiplicity_vertex(nets[0], out.outcomes[0].path, inst.node_index("b")) == 1);
    }
  }
  SUBCASE("acceptance frequency one half") {
    Instance inst = fx::three_layer(1.6);
    auto nets = build_product_networks(inst);
    FractionalSolution sol;
    sol.flows.push_back(fx::three_layer_flow(inst, nets[0]));
    Rounder rounder(inst, nets, sol);
    int accepted = 0;
    for (int t = 0; t < kTrials; ++t) accepted += rounder.round(t).outcomes[0].accepted;
    CHECK(std::abs(accepted / double(kTrials) - 0.5) <= 0.01);
  }
}

TEST_CASE("rounding is independent of request order") {
  auto net = fx::substrate({"a", "b"}, {{"e1", "a", "b", 3}});
  std::vector<Request> reqs{fx::routing("p", 1, 1), fx::routing("q", 1, 2),
                            fx::routing("r", 1, 3)};
  Instance fwd(net, reqs);
  std::reverse(reqs.begin(), reqs.end());
  Instance rev(net, reqs);
  CHECK(fwd == rev);
  PipelineResult a = run_pipeline(fwd, {0.5, 0.05, 17});
  PipelineResult b = run_pipeline(rev, {0.5, 0.05, 17});
  REQUIRE(a.integral.outcomes.size() == b.integral.outcomes.size());
  for (std::size_t i = 0; i < a.integral.outcomes.size(); ++i) {
    CHECK(a.integral.outcomes[i].accepted == b.integral.outcomes[i].accepted);
    CHECK(a.integral.outcomes[i].path == b.integral.outcomes[i].path);
  }
  // Each stream is a function of (seed, id) alone.
  RoundingRng x(17, "q"), y(17, "q");
  CHECK(x.uniform() == y.uniform());
}

TEST_CASE("expected flow and amount on the three-layer fixture") {
  Instance inst = fx::three_layer();
  auto nets = build_product_networks(inst);
  const ProductNetwork& pn = nets[0];
  FractionalSolution sol;
  sol.flows.push_back(fx::three_layer_flow(inst, pn));
  Rounder rounder(inst, nets, sol);
  std::vector<int> used(pn.edges().size(), 0);
  double amount = 0.0;
  for (int t = 0; t < kTrials; ++t) {
    IntegralSolution out = rounder.round(static_cast<std::uint64_t>(t));
    const RequestOutcome& o = out.outcomes[0];
    if (!o.accepted) continue;
    REQUIRE(is_valid_realization(pn, o.path));
    amount += inst.requests()[0].demand;
    for (std::size_t e : o.path.edges) ++used[e];
  }
  const double d = inst.requests()[0].demand;
  const double slack = 3 * (d / 2) / std::sqrt(double(kTrials));
  for (std::size_t e = 0; e < pn.edges().size(); ++e) {
    CHECK(std::abs(used[e] * d / kTrials - sol.flows[0].edge_flow[e]) <= slack);
  }
  CHECK(std::abs(amount / kTrials - sol.flows[0].amount) <= slack);
}
