#include "ftl/hierarchy.hpp"

#include "doctest.h"
#include "test_util.hpp"

using namespace ftl;
using ftl_test::Rng;

namespace {

Graph k5() {
  std::vector<Edge> es;
  int id = 0;
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) es.push_back({id++, u, v, 1, Rat(1)});
  return Graph(5, std::move(es));
}

Graph bridge_graph() {
  return Graph(6, {{0, 0, 1, 1, Rat(1)},
                   {1, 0, 2, 1, Rat(1)},
                   {2, 1, 2, 1, Rat(1)},
                   {3, 2, 3, 1, Rat(1)},
                   {4, 3, 4, 1, Rat(1)},
                   {5, 3, 5, 1, Rat(1)},
                   {6, 4, 5, 1, Rat(1)}});
}

// K4 - bridge - K4
Graph barbell8() {
  std::vector<Edge> es;
  int id = 0;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) es.push_back({id++, u, v, 1, Rat(1)});
  for (int u = 4; u < 8; ++u)
    for (int v = u + 1; v < 8; ++v) es.push_back({id++, u, v, 1, Rat(1)});
  es.push_back({id++, 3, 4, 1, Rat(1)});
  return Graph(8, std::move(es));
}

}  // namespace

TEST_CASE("hierarchy: zero update keeps the all-zero hierarchy") {
  Graph g = k5();
  Hierarchy h = make_hierarchy(g, 2, 100, Rat(1, 64), 2);
  hierarchy_update(h, NodeWeighting{});
  for (int j = 0; j <= 2; ++j) CHECK(h.levels[j].is_zero());
  for (int i = 1; i <= 2; ++i) CHECK(h.cuts[i].is_zero());
  CHECK(validate_hierarchy(h, g).pass);
}

TEST_CASE("hierarchy: K5 with generous phi keeps all cuts empty") {
  Graph g = k5();
  NodeWeighting a = deg_weighting(g);
  Hierarchy h = make_hierarchy(g, 2, 100, Rat(1, 2000), 2);
  hierarchy_update(h, a);
  for (int i = 1; i <= 2; ++i) CHECK(h.cuts[i].is_zero());
  CHECK(h.levels[0] == a);  // A_0 = A when no cuts
  HierarchyReport rep = validate_hierarchy(h, g);
  CHECK(rep.pass);
}

TEST_CASE("hierarchy: incremental updates reject non-monotone input") {
  Graph g = k5();
  Hierarchy h = make_hierarchy(g, 2, 100, Rat(1, 64), 1);
  NodeWeighting a;
  a.set(0, Rat(2));
  hierarchy_update(h, a);
  NodeWeighting smaller;
  smaller.set(0, Rat(1));
  CHECK_THROWS_AS(hierarchy_update(h, smaller), UsageError);
}

TEST_CASE("hierarchy: bridge graph with tight phi cuts the bridge, identities exact") {
  Graph g = bridge_graph();
  NodeWeighting a = deg_weighting(g);
  Hierarchy h = build_hierarchy(g, a, 1, 100, 2, Rat(1, 5));
  CHECK(!h.cuts[1].is_zero());
  CHECK(h.cuts[1].value(3) > 0);  // bridge edge id 3
  // bookkeeping identities, exact
  CHECK(h.levels[0] == h.levels[1].plus(h.a));
  CHECK(h.levels[1] == h.levels[2].plus(deg_of_cut(g, h.cuts[1])));
  CHECK(h.levels[2] == deg_of_cut(g, h.cuts[2]));
  // nestedness (Def 4.1(3)) exact
  for (int i = 1; i <= 2; ++i) {
    CHECK(deg_of_cut(g, h.cuts[i]).leq(h.levels[i]));
    CHECK(h.levels[i].leq(h.levels[i - 1]));
  }
  HierarchyReport rep = validate_hierarchy(h, g);
  for (const auto& c : rep.checks) CHECK_MESSAGE(c.pass, c.name, ": ", c.detail);
  long long bound = 6 * 5 / 2;
  for (long long c : h.nonzero_delta) CHECK(c <= bound);
}

TEST_CASE("hierarchy: |A| <= 1 admits the empty hierarchy at any depth") {
  Graph g = bridge_graph();
  NodeWeighting tiny;
  tiny.set(0, Rat(1, 2));
  for (int d : {1, 2, 3}) {
    Hierarchy h = build_hierarchy(g, tiny, 1, 100, d);
    CHECK(validate_hierarchy(h, g).pass);
    CHECK(h.levels[d].total() <= 1);
  }
}

TEST_CASE("hierarchy: barbell d=1 passes full validation") {
  Graph g = barbell8();
  Hierarchy h = build_hierarchy(g, deg_weighting(g), 1, 100, 1);
  HierarchyReport rep = validate_hierarchy(h, g);
  for (const auto& c : rep.checks) CHECK_MESSAGE(c.pass, c.name, ": ", c.detail);
}

TEST_CASE("hierarchy: corrupting A_1 breaks nestedness validation") {
  Graph g = bridge_graph();
  Hierarchy h = build_hierarchy(g, deg_weighting(g), 1, 100, 2, Rat(1, 5));
  REQUIRE(!h.levels[1].is_zero());
  // raise one A_1 entry above A_0
  int v = h.levels[1].entries().begin()->first;
  h.levels[1].set(v, h.levels[0].value(v) + 1);
  HierarchyReport rep = validate_hierarchy(h, g);
  CHECK(!rep.pass);
  bool nested_failed = false;
  for (const auto& c : rep.checks)
    if (c.name == "A1 <= A0" && !c.pass) nested_failed = true;
  CHECK(nested_failed);
}

TEST_CASE("hierarchy: seeded builds validate end to end") {
  Rng rng(313);
  for (int it = 0; it < 6; ++it) {
    int n = 4 + (int)rng.below(5);
    Graph g = ftl_test::random_graph(rng, n, (int)rng.below(6), 4);
    Hierarchy h = build_hierarchy(g, deg_weighting(g), (Len)rng.range(1, 4), 100, 2);
    HierarchyReport rep = validate_hierarchy(h, g);
    for (const auto& c : rep.checks) CHECK_MESSAGE(c.pass, c.name, ": ", c.detail);
    CHECK(rep.gamma <= Rat(1, 2));
  }
}
