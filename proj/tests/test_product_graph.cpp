#include "doctest.h"

#include "fixtures.hpp"
#include "json.hpp"
#include "oracles/path_lp.hpp"
#include "pcfp/generator.hpp"
#include "pcfp/product_graph.hpp"

using namespace pcfp;

namespace {

std::size_t count_kind(const ProductNetwork& pn, ProductEdgeKind kind) {
  std::size_t n = 0;
  for (const ProductEdge& e : pn.edges()) n += e.kind == kind ? 1 : 0;
  return n;
}

// s* -> (a,y1) -> (b,y1) -> (b,y2) -> (a,y2) -> t*
ProductPath fixture_path(const Instance& inst, const ProductNetwork& pn) {
  const std::size_t a1 = fx::node(inst, pn, "a", 0), b1 = fx::node(inst, pn, "b", 0);
  const std::size_t a2 = fx::node(inst, pn, "a", 1), b2 = fx::node(inst, pn, "b", 1);
  ProductPath p;
  p.request = 0;
  p.edges = {fx::find_edge(pn, ProductNetwork::kSuperSource, a1), fx::find_edge(pn, a1, b1),
             fx::find_edge(pn, b1, b2), fx::find_edge(pn, b2, a2),
             fx::find_edge(pn, a2, ProductNetwork::kSuperSink)};
  return p;
}

}  // namespace

TEST_CASE("worked two-layer product network") {
  Instance inst = fx::two_layer();
  ProductNetwork pn = build_product_network(inst, 0);
  CHECK(pn.routable());
  CHECK(pn.layer_count() == 2);
  CHECK(pn.nodes().size() == 4 + 2);
  CHECK(count_kind(pn, ProductEdgeKind::kRouting) == 4);
  CHECK(count_kind(pn, ProductEdgeKind::kProcessing) == 1);
  const std::size_t b1 = fx::node(inst, pn, "b", 0), b2 = fx::node(inst, pn, "b", 1);
  REQUIRE(b1 != kNone);
  REQUIRE(b2 != kNone);
  std::size_t proc = fx::find_edge(pn, b1, b2);
  REQUIRE(proc != kNone);
  CHECK(pn.edges()[proc].kind == ProductEdgeKind::kProcessing);
  CHECK(pn.edges()[proc].substrate_node == inst.node_index("b"));
  // s* only into the source layer at U(s), t* only from the sink layer at U(t).
  for (std::size_t e : pn.out_edges(ProductNetwork::kSuperSource)) {
    CHECK(pn.edges()[e].to == fx::node(inst, pn, "a", 0));
  }
  for (std::size_t e : pn.in_edges(ProductNetwork::kSuperSink)) {
    CHECK(pn.edges()[e].from == fx::node(inst, pn, "a", 1));
  }
}

TEST_CASE("unrestricted single-layer request copies the substrate") {
  auto net = fx::substrate({"a", "b", "c"},
                           {{"e1", "a", "b", 1}, {"e2", "b", "c", 1}, {"e3", "a", "b", 1}});
  std::vector<std::string> all_nodes{"a", "b", "c"};
  Instance inst(net, {fx::chain("r", 1, 1, {all_nodes, all_nodes}, {{"e1", "e2", "e3"}})});
  ProductNetwork pn = build_product_network(inst, 0);
  CHECK(pn.nodes().size() == 3 + 2);
  CHECK(count_kind(pn, ProductEdgeKind::kRouting) == 6);
  for (const char* e : {"e1", "e2", "e3"}) {
    std::size_t fwd = 0;
    for (const ProductEdge& pe : pn.edges()) {
      fwd += pe.kind == ProductEdgeKind::kRouting && pe.substrate_edge == inst.edge_index(e);
    }
    CHECK(fwd == 2);
  }
  CHECK(count_kind(pn, ProductEdgeKind::kProcessing) == 0);
}

TEST_CASE("disjoint placement gives no processing edges and no route") {
  auto net = fx::substrate({"a", "b", "c"}, {{"e1", "a", "b", 1}});
  Instance inst(net, {fx::chain("r", 1, 1, {{"a"}, {"c"}, {"b"}}, {{"e1"}, {"e1"}})});
  ProductNetwork pn = build_product_network(inst, 0);
  CHECK(count_kind(pn, ProductEdgeKind::kProcessing) == 0);
  CHECK(!pn.routable());
}

TEST_CASE("projection of the fixture realization") {
  Instance inst = fx::two_layer();
  ProductNetwork pn = build_product_network(inst, 0);
  ProductPath p = fixture_path(inst, pn);
  CHECK(is_valid_realization(pn, p));
  SubstrateWalk w = project_path(pn, p);
  CHECK(w.start == inst.node_index("a"));
  REQUIRE(w.steps.size() == 3);
  CHECK(w.steps[0].kind == WalkStep::Kind::kRoute);
  CHECK(w.steps[0].edge == inst.edge_index("e1"));
  CHECK(w.steps[0].to == inst.node_index("b"));
  CHECK(w.steps[1].kind == WalkStep::Kind::kProcess);
  CHECK(w.steps[1].from == inst.node_index("b"));
  CHECK(inst.requests()[0].graph.vertices[w.steps[1].pr_vertex] == "x1");
  CHECK(w.steps[2].kind == WalkStep::Kind::kRoute);
  CHECK(w.steps[2].to == inst.node_index("a"));

  CHECK(multiplicity_edge(pn, p, inst.edge_index("e1")) == 2);
  CHECK(multiplicity_vertex(pn, p, inst.node_index("b")) == 1);
  CHECK(multiplicity_vertex(pn, p, inst.node_index("a")) == 0);
  CHECK(realized_pr_path(pn, p) == std::vector<std::size_t>{0, 1});
}

TEST_CASE("processing in place has no routing steps") {
  Instance inst(fx::substrate({"a", "b"}, {{"e1", "a", "b", 1}}),
                {fx::chain("r", 1, 1, {{"a"}, {"a"}, {"a"}}, {{"e1"}, {"e1"}})});
  ProductNetwork pn = build_product_network(inst, 0);
  const std::size_t a1 = fx::node(inst, pn, "a", 0), a2 = fx::node(inst, pn, "a", 1);
  ProductPath p{0, {fx::find_edge(pn, ProductNetwork::kSuperSource, a1), fx::find_edge(pn, a1, a2),
                    fx::find_edge(pn, a2, ProductNetwork::kSuperSink)}};
  CHECK(is_valid_realization(pn, p));
  SubstrateWalk w = project_path(pn, p);
  REQUIRE(w.steps.size() == 1);
  CHECK(w.steps[0].kind == WalkStep::Kind::kProcess);
}

TEST_CASE("project_path rejects bad input") {
  Instance inst = fx::two_layer();
  ProductNetwork pn = build_product_network(inst, 0);
  CHECK_THROWS_AS(project_path(pn, ProductPath{0, {}}), InvalidArgument);
  CHECK_THROWS_AS(project_path(pn, ProductPath{0, {999}}), InvalidArgument);
}

TEST_CASE("multiplicities in other shapes") {
  SUBCASE("edge outside every allowed set") {
    Instance inst(fx::substrate({"a", "b"}, {{"e1", "a", "b", 1}, {"e2", "a", "b", 1}}),
                  {fx::routing("r", 1, 1)});
    ProductNetwork pn = build_product_network(inst, 0);
    ProductPath p{0, {fx::find_edge(pn, 0, fx::node(inst, pn, "a", 0)),
                      fx::find_edge(pn, fx::node(inst, pn, "a", 0), fx::node(inst, pn, "b", 0)),
                      fx::find_edge(pn, fx::node(inst, pn, "b", 0), 1)}};
    CHECK(is_valid_realization(pn, p));
    CHECK(multiplicity_edge(pn, p, inst.edge_index("e1")) == 1);
    CHECK(multiplicity_edge(pn, p, inst.edge_index("e2")) == 0);
  }
  SUBCASE("two stages at the same node") {
    Instance inst(fx::substrate({"a", "b"}, {{"e1", "a", "b", 1}}),
                  {fx::chain("r", 1, 1, {{"a"}, {"b"}, {"b"}, {"a"}}, {{"e1"}, {"e1"}, {"e1"}})});
    ProductNetwork pn = build_product_network(inst, 0);
    std::size_t twice = 0;
    for (const auto& edges : oracle::simple_paths(pn)) {
      ProductPath p{0, edges};
      if (multiplicity_vertex(pn, p, inst.node_index("b")) == 2) ++twice;
    }
    CHECK(twice >= 1);
  }
}

TEST_CASE("is_valid_realization rejects partial and repeating paths") {
  Instance inst = fx::two_layer();
  ProductNetwork pn = build_product_network(inst, 0);
  ProductPath full = fixture_path(inst, pn);
  ProductPath partial{0, {full.edges[0], full.edges[1]}};
  CHECK(!is_valid_realization(pn, partial));
  const std::size_t a1 = fx::node(inst, pn, "a", 0), b1 = fx::node(inst, pn, "b", 0);
  ProductPath loop{0, {full.edges[0], fx::find_edge(pn, a1, b1), fx::find_edge(pn, b1, a1),
                       fx::find_edge(pn, a1, b1)}};
  CHECK(!is_valid_realization(pn, loop));
  ProductPath wrong_request = full;
  wrong_request.request = 5;
  CHECK(!is_valid_realization(pn, wrong_request));
}

TEST_CASE("structural properties over every simple path of small networks") {
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    GeneratorParams g;
    g.family = seed % 2 ? SubstrateFamily::kPath : SubstrateFamily::kRandom;
    g.nodes = 3;
    g.requests = 2;
    g.chain_length = seed % 3;
    g.stage_node_fraction = 0.7;
    Instance inst = generate_instance(g, seed);
    for (const ProductNetwork& pn : build_product_networks(inst)) {
      if (pn.nodes().size() > 12) continue;
      const Request& r = inst.requests()[pn.request()];
      for (const auto& edges : oracle::simple_paths(pn)) {
        ProductPath p{pn.request(), edges};
        REQUIRE(is_valid_realization(pn, p));
        int total = 0;
        for (std::size_t e = 0; e < inst.substrate().edges.size(); ++e) {
          int m = multiplicity_edge(pn, p, e);
          CHECK(m <= static_cast<int>(r.graph.edges.size()));
          total += m;
        }
        int processing = 0;
        for (std::size_t v = 0; v < inst.substrate().nodes.size(); ++v) {
          processing += multiplicity_vertex(pn, p, v);
        }
        total += processing;
        CHECK(total == static_cast<int>(p.edges.size()) - 2);
        CHECK(processing == static_cast<int>(realized_pr_path(pn, p).size()) - 1);

        // Consecutive incidence of the projected walk.
        SubstrateWalk w = project_path(pn, p);
        std::size_t at = w.start;
        for (const WalkStep& s : w.steps) {
          CHECK(s.from == at);
          if (s.kind == WalkStep::Kind::kRoute) {
            const SubstrateEdge& se = inst.substrate().edges[s.edge];
            std::size_t a = inst.node_index(se.a), b = inst.node_index(se.b);
            CHECK(((a == s.from && b == s.to) || (b == s.from && a == s.to)));
          } else {
            CHECK(s.to == s.from);
          }
          at = s.to;
        }
        ++checked;
      }
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("product network dump is JSON") {
  Instance inst = fx::two_layer();
  auto nets = build_product_networks(inst);
  auto doc = nlohmann::json::parse(dump_product_networks(inst, nets));
  REQUIRE(doc.is_array());
  CHECK(doc.size() == 1);
  CHECK(node_label(inst, nets[0], ProductNetwork::kSuperSource) == "s*");
  CHECK(node_label(inst, nets[0], fx::node(inst, nets[0], "b", 1)) == "(b,y2)");
}
