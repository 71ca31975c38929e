#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sigmax/core.hpp"

using namespace sigmax;
using namespace testutil;

TEST_CASE("build_graph validates its inputs") {
  const std::vector<PurchaseNode> nodes = {pn("a", "x"), pn("b", "x"), pn("c", "x")};

  SUBCASE("empty source set") {
    CHECK_THROWS_AS(build_graph(nodes, {he({}, pn("a", "x"), 0.5)}), ValidationError);
  }
  SUBCASE("probability out of range") {
    CHECK_THROWS_AS(build_graph(nodes, {he({pn("a", "x")}, pn("b", "x"), 1.5)}),
                    ValidationError);
    CHECK_THROWS_AS(build_graph(nodes, {he({pn("a", "x")}, pn("b", "x"), -0.1)}),
                    ValidationError);
  }
  SUBCASE("dangling endpoints") {
    CHECK_THROWS_AS(build_graph(nodes, {he({pn("nope", "x")}, pn("b", "x"), 0.5)}),
                    ValidationError);
    CHECK_THROWS_AS(build_graph(nodes, {he({pn("a", "x")}, pn("nope", "x"), 0.5)}),
                    ValidationError);
  }
  SUBCASE("destination among sources") {
    CHECK_THROWS_AS(
        build_graph(nodes, {he({pn("a", "x"), pn("b", "x")}, pn("a", "x"), 0.5)}),
        ValidationError);
  }
  SUBCASE("boundary probabilities are legal") {
    const SocialItemGraph g = build_graph(nodes, {he({pn("a", "x")}, pn("b", "x"), 0.0),
                                                  he({pn("a", "x")}, pn("c", "x"), 1.0)});
    CHECK(g.edge_count() == 2);
  }
}

TEST_CASE("build_graph deduplicates nodes and collapses repeated hyperedges") {
  const std::vector<PurchaseNode> nodes = {pn("a", "x"), pn("a", "x"), pn("b", "x")};
  // Same (sources, dest) twice: the later probability wins.
  const SocialItemGraph g = build_graph(nodes, {he({pn("a", "x")}, pn("b", "x"), 0.3),
                                                he({pn("a", "x")}, pn("b", "x"), 0.8)});
  CHECK(g.node_count() == 2);
  REQUIRE(g.edge_count() == 1);
  CHECK(g.edges()[0].prob == 0.8);
  // Sources are stored as a set regardless of listing order.
  const SocialItemGraph g2 = build_graph(
      {pn("a", "x"), pn("b", "x"), pn("c", "x")},
      {he({pn("b", "x"), pn("a", "x")}, pn("c", "x"), 0.4),
       he({pn("a", "x"), pn("b", "x")}, pn("c", "x"), 0.6)});
  REQUIRE(g2.edge_count() == 1);
  CHECK(g2.edges()[0].prob == 0.6);
}

TEST_CASE("node order is lexicographic in (user, item)") {
  const SocialItemGraph g = build_graph(
      {pn("b", "i1"), pn("a", "i2"), pn("a", "i1")}, {});
  REQUIRE(g.node_count() == 3);
  CHECK(g.node(0) == pn("a", "i1"));
  CHECK(g.node(1) == pn("a", "i2"));
  CHECK(g.node(2) == pn("b", "i1"));
  CHECK(g.node_id(pn("a", "i2")) == NodeId{1});
  CHECK(!g.node_id(pn("zz", "i1")).has_value());
  CHECK_THROWS_AS(g.require_node_id(pn("zz", "i1")), ValidationError);
}

TEST_CASE("exact adoption on a single uncertain edge") {
  const SocialItemGraph g = build_graph({pn("u", "x"), pn("v", "x")},
                                        {he({pn("u", "x")}, pn("v", "x"), 0.5)});
  const AdoptionBreakdown b =
      exact_adoption_detail(g, ids_of(g, {pn("u", "x")}));
  CHECK(b.adoption == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(b.world_mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b.worlds == 2);
}

TEST_CASE("all-source gate in the exact oracle") {
  const SocialItemGraph g =
      build_graph({pn("a", "x"), pn("b", "x"), pn("c", "x")},
                  {he({pn("a", "x"), pn("b", "x")}, pn("c", "x"), 1.0)});
  CHECK(exact_adoption(g, {pn("a", "x")}) == doctest::Approx(1.0));
  CHECK(exact_adoption(g, {pn("a", "x"), pn("b", "x")}) == doctest::Approx(3.0));
}

TEST_CASE("certain chains are not enumerated") {
  const SocialItemGraph g =
      build_graph({pn("u", "x"), pn("v", "x"), pn("w", "x")},
                  {he({pn("u", "x")}, pn("v", "x"), 1.0),
                   he({pn("v", "x")}, pn("w", "x"), 1.0)});
  const AdoptionBreakdown b = exact_adoption_detail(g, ids_of(g, {pn("u", "x")}));
  CHECK(b.adoption == 3.0);
  CHECK(b.worlds == 1);  // p = 1 edges are always live, p = 0 never: nothing random
}

TEST_CASE("zero-probability edges never fire and never count toward the cap") {
  std::vector<PurchaseNode> nodes = {pn("u", "x"), pn("v", "x")};
  std::vector<Hyperedge> edges = {he({pn("u", "x")}, pn("v", "x"), 0.0)};
  const SocialItemGraph g = build_graph(nodes, edges);
  const AdoptionBreakdown b = exact_adoption_detail(g, ids_of(g, {pn("u", "x")}), 0);
  CHECK(b.adoption == 1.0);
  CHECK(b.worlds == 1);
}

TEST_CASE("enumeration cap counts only uncertain edges") {
  // 23 uncertain edges into distinct destinations exceeds the default cap of 22.
  std::vector<PurchaseNode> nodes = {pn("s", "x")};
  std::vector<Hyperedge> edges;
  for (int i = 0; i < 23; ++i) {
    const PurchaseNode d = pn("t" + std::to_string(100 + i), "x");
    nodes.push_back(d);
    edges.push_back(he({pn("s", "x")}, d, 0.5));
  }
  const SocialItemGraph g = build_graph(nodes, edges);
  CHECK_THROWS_AS(exact_adoption(g, {pn("s", "x")}), CapExceeded);
  // Converting one edge to certainty brings the count back under the cap.
  edges[0].prob = 1.0;
  const SocialItemGraph g2 = build_graph(nodes, edges);
  CHECK(exact_adoption(g2, {pn("s", "x")}) ==
        doctest::Approx(1.0 + 1.0 + 22 * 0.5).epsilon(1e-12));
}

TEST_CASE("exact adoption is monotone in the seed set") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const SocialItemGraph g = random_graph(seed, 10, 16, 14);
    std::vector<NodeId> small, large;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (v % 3 == 0) small.push_back(v);
      if (v % 3 == 0 || v % 3 == 1) large.push_back(v);
    }
    const double a_small = exact_adoption_ids(g, small);
    const double a_large = exact_adoption_ids(g, large);
    CHECK(a_large >= a_small - 1e-12);
  }
}

TEST_CASE("expected adoption is not submodular") {
  // w needs both u1 and u2: the marginal gain of u2 grows once u1 is present.
  const SocialItemGraph g = build_graph(
      {pn("u1", "x"), pn("u2", "x"), pn("w", "x")},
      {he({pn("u1", "x"), pn("u2", "x")}, pn("w", "x"), 1.0)});
  const auto a = [&](const std::vector<PurchaseNode>& s) { return exact_adoption(g, s); };
  const double gain_alone = a({pn("u2", "x")}) - a({});
  const double gain_with_u1 =
      a({pn("u1", "x"), pn("u2", "x")}) - a({pn("u1", "x")});
  CHECK(gain_alone == doctest::Approx(1.0));
  CHECK(gain_with_u1 == doctest::Approx(2.0));
  CHECK(gain_with_u1 > gain_alone + 0.5);
}

TEST_CASE("world mass sums to one on random instances") {
  for (std::uint64_t seed = 11; seed <= 16; ++seed) {
    const SocialItemGraph g = random_graph(seed, 10, 18, 16);
    std::vector<NodeId> seeds;
    for (NodeId v = 0; v < g.node_count(); v += 2) seeds.push_back(v);
    const AdoptionBreakdown b = exact_adoption_detail(g, seeds);
    CHECK(b.world_mass == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(b.adoption >= static_cast<double>(seeds.size()) - 1e-9);
    CHECK(b.adoption <= static_cast<double>(g.node_count()) + 1e-9);
  }
}

TEST_CASE("exact adoption: serial and parallel agree bitwise") {
  for (std::uint64_t seed = 21; seed <= 26; ++seed) {
    const SocialItemGraph g = random_graph(seed, 12, 24, 18);
    std::vector<NodeId> seeds;
    for (NodeId v = 0; v < g.node_count(); v += 3) seeds.push_back(v);
    const double s = exact_adoption_ids(g, seeds, kDefaultExactCap, Exec::serial);
    const double p = exact_adoption_ids(g, seeds, kDefaultExactCap, Exec::parallel);
    CHECK(s == p);
  }
}

TEST_CASE("social and item filters split the edge set by shared ids") {
  // Same item, same user, and mixed hyperedges side by side.
  const std::vector<PurchaseNode> nodes = {pn("a", "i1"), pn("a", "i2"), pn("b", "i1"),
                                           pn("b", "i2"), pn("c", "i1")};
  const SocialItemGraph g = build_graph(
      nodes, {he({pn("a", "i1")}, pn("b", "i1"), 0.5),                 // social: item i1
              he({pn("a", "i1")}, pn("a", "i2"), 0.6),                 // item: user a
              he({pn("a", "i1"), pn("b", "i2")}, pn("c", "i1"), 0.7),  // mixed
              he({pn("b", "i1"), pn("c", "i1")}, pn("a", "i1"), 0.2)});  // social
  const SocialItemGraph social = filter_social_only(g);
  const SocialItemGraph item = filter_item_only(g);
  CHECK(social.edge_count() == 2);
  CHECK(item.edge_count() == 1);
  // Node sets survive filtering so ids stay comparable.
  CHECK(social.node_count() == g.node_count());
  CHECK(item.node_count() == g.node_count());
  for (const EdgeRec& e : social.edges()) {
    const std::string& it = social.node(e.dest).item;
    for (NodeId s : e.sources) CHECK(social.node(s).item == it);
  }
  for (const EdgeRec& e : item.edges()) {
    const std::string& us = item.node(e.dest).user;
    for (NodeId s : e.sources) CHECK(item.node(s).user == us);
  }
}

TEST_CASE("adoption under filters never exceeds the full graph") {
  for (std::uint64_t seed = 31; seed <= 36; ++seed) {
    const SocialItemGraph g = random_graph(seed, 10, 14, 12);
    std::vector<NodeId> seeds;
    for (NodeId v = 0; v < g.node_count(); v += 2) seeds.push_back(v);
    const double full = exact_adoption_ids(g, seeds);
    CHECK(exact_adoption_ids(filter_social_only(g), seeds) <= full + 1e-9);
    CHECK(exact_adoption_ids(filter_item_only(g), seeds) <= full + 1e-9);
  }
}
