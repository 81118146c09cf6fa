#include "ftl/cover.hpp"

#include <numeric>
#include <set>

#include "doctest.h"
#include "test_util.hpp"

using namespace ftl;
using ftl_test::Rng;

namespace {

// the example tree: a..k with the tour (a,b,c,b,d,e,f,e,d,g,h,g,i,g,d,b,k,b,a,j,a)
// under ids a=0 b=1 c=2 d=3 e=4 f=5 g=6 h=7 i=8 j=9 k=10
Graph figure_tree() {
  std::vector<std::pair<int, int>> te{{0, 1}, {1, 2}, {1, 3}, {3, 4}, {4, 5},
                                      {3, 6}, {6, 7}, {6, 8}, {1, 10}, {0, 9}};
  std::vector<Edge> es;
  int id = 0;
  for (auto [u, v] : te) es.push_back({id++, u, v, 1, Rat(1)});
  return Graph(11, std::move(es));
}

Graph random_tree(Rng& rng, int n, long long lmax = 4) {
  std::vector<Edge> es;
  for (int v = 1; v < n; ++v)
    es.push_back({v - 1, (int)rng.below((uint64_t)v), v, rng.range(1, lmax), Rat(1)});
  return Graph(n, std::move(es));
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

TEST_CASE("build_cover: path of 8 unit edges, h_cov=1, s_nc=2") {
  std::vector<Edge> es;
  for (int i = 0; i < 8; ++i) es.push_back({i, i, i + 1, 1, Rat(1)});
  Graph g(9, std::move(es));
  NeighborhoodCover nc = build_cover(g, 1, 2);
  std::string why;
  CHECK_MESSAGE(check_cover(g, nc, &why), why);
  CHECK(nc.h_diam == 2);
}

TEST_CASE("build_cover: small diameter graph can be one cluster; n=1") {
  // triangle, h_cov large: the whole vertex set in one clustering
  std::vector<Edge> es{{0, 0, 1, 1, Rat(1)}, {1, 1, 2, 1, Rat(1)}, {2, 0, 2, 1, Rat(1)}};
  Graph g(3, std::move(es));
  NeighborhoodCover nc = build_cover(g, 5, 2);
  CHECK(check_cover(g, nc));
  CHECK(nc.width() == 1);
  CHECK(nc.clusterings[0].clusters.size() == 1);
  CHECK(nc.clusterings[0].clusters[0].size() == 3);

  Graph single(1, {});
  NeighborhoodCover nc1 = build_cover(single, 3, 2);
  CHECK(nc1.width() == 1);
  REQUIRE(nc1.clusterings[0].clusters.size() == 1);
  CHECK(nc1.clusterings[0].clusters[0] == std::vector<int>{0});
}

TEST_CASE("build_cover: contract holds up to n = 50") {
  Rng rng(20240702);
  for (int it = 0; it < 30; ++it) {
    int n = 2 + (int)rng.below(49);
    Graph g = ftl_test::random_graph(rng, n, (int)rng.below(12), 6, it % 4 != 0);
    Len h_cov = (Len)rng.range(1, 8);
    int s_nc = 2 + (int)rng.below(2);
    NeighborhoodCover nc = build_cover(g, h_cov, s_nc);
    std::string why;
    CHECK_MESSAGE(check_cover(g, nc, &why), why);
  }
}

TEST_CASE("build_cluster_tree: star, pruned triangle, singleton") {
  std::vector<Edge> star{{0, 0, 1, 1, Rat(1)}, {1, 0, 2, 1, Rat(1)}, {2, 0, 3, 1, Rat(1)}};
  Graph gs(4, std::move(star));
  ClusterTree ts = build_cluster_tree(gs, {0, 1, 2, 3});
  CHECK(ts.root == 0);
  CHECK(ts.parent.size() == 3);
  for (int v = 1; v <= 3; ++v) CHECK(ts.parent.at(v).first == 0);

  // triangle with lengths 1,1,3: SSSP tree drops the length-3 edge
  std::vector<Edge> tri{{0, 0, 1, 1, Rat(1)}, {1, 1, 2, 1, Rat(1)}, {2, 0, 2, 3, Rat(1)}};
  Graph gt(3, std::move(tri));
  ClusterTree tt = build_cluster_tree(gt, {0, 1, 2});
  CHECK(tt.parent.at(2).second == 1);  // 2 hangs off edge id 1, not the long edge

  // singleton: empty tree, tour of length 1
  ClusterTree t1 = build_cluster_tree(gs, {2});
  CHECK(t1.root == 2);
  CHECK(t1.tour.seq == std::vector<int>{2});

  std::vector<Edge> two{{0, 0, 1, 1, Rat(1)}};
  Graph gd(4, std::move(two));
  CHECK_THROWS_AS(build_cluster_tree(gd, {0, 1, 2}), ConstructionError);
}

TEST_CASE("euler tour of the figure tree") {
  Graph g = figure_tree();
  ClusterTree t = build_cluster_tree(g, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  std::vector<int> expect{0, 1, 2, 1, 3, 4, 5, 4, 3, 6, 7,
                          6, 8, 6, 3, 1, 10, 1, 0, 9, 0};
  CHECK(t.tour.seq == expect);
  CHECK(t.tour.pos.at({0, 1}) == 1);
  CHECK(t.tour.pos.at({6, 3}) == 14);
  CHECK(t.tour.start.at(1) == 1);
  CHECK(t.tour.end.at(1) == 17);
  CHECK(t.tour.start.at(6) == 9);
  CHECK(t.tour.end.at(6) == 13);
  CHECK(t.tour.start.at(4) == 5);
  CHECK(t.tour.end.at(4) == 7);
}

TEST_CASE("maximal_interval matches the tau_heavy = 12 figure") {
  Graph g = figure_tree();
  ClusterTree t = build_cluster_tree(g, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  NodeWeighting a;
  long av[] = {5, 5, 3, 1, 0, 2, 1, 3, 4, 2, 0};
  for (int v = 0; v < 11; ++v) a.set(v, Rat(av[v]));
  // red failed edge {a,b}, orientation (a,b): covers (b,c,b,d,e,f,e,d,g)
  CHECK(maximal_interval(t.tour, t.tour.pos.at({0, 1}), a, Rat(12)) == 10);
  // blue failed edge {d,g}, orientation (g,d): covers (d,b,k,b,a)
  CHECK(maximal_interval(t.tour, t.tour.pos.at({6, 3}), a, Rat(12)) == 19);
}

TEST_CASE("maximal_interval: whole tour and empty window") {
  Graph g = figure_tree();
  ClusterTree t = build_cluster_tree(g, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  NodeWeighting ones;
  for (int v = 0; v < 11; ++v) ones.set(v, Rat(1));
  int t0 = t.tour.pos.at({0, 1});
  CHECK(maximal_interval(t.tour, t0, ones, Rat(100)) == t0 + 2 * (11 - 1));
  CHECK(maximal_interval(t.tour, t0, ones, Rat(0)) == t0);
}

TEST_CASE("recover_components: no failures and the figure's two failures") {
  auto comps0 = recover_components(4, {Rat(10)}, {});
  REQUIRE(comps0.size() == 1);
  CHECK(comps0[0].intervals == std::vector<std::pair<int, int>>{{0, 6}});
  CHECK(comps0[0].a_mass[0] == 10);

  // figure: failed {a,b} and {d,g}; child records b=[1,17], g=[9,13]
  long av[] = {5, 5, 3, 1, 0, 2, 1, 3, 4, 2, 0};
  Rat total = 0, sub_b = 0, sub_g = 0;
  for (int v = 0; v < 11; ++v) total += av[v];
  for (int v : {1, 2, 3, 4, 5, 6, 7, 8, 10}) sub_b += av[v];
  for (int v : {6, 7, 8}) sub_g += av[v];
  auto comps = recover_components(11, {total},
                                  {{1, 17, {sub_b}}, {9, 13, {sub_g}}});
  REQUIRE(comps.size() == 3);
  CHECK(comps[0].intervals == std::vector<std::pair<int, int>>{{0, 0}, {18, 20}});
  CHECK(comps[0].a_mass[0] == 7);  // {a, j}
  CHECK(comps[1].intervals == std::vector<std::pair<int, int>>{{1, 8}, {14, 17}});
  CHECK(comps[1].a_mass[0] == 11);  // {b,c,d,e,f,k}
  CHECK(comps[2].intervals == std::vector<std::pair<int, int>>{{9, 13}});
  CHECK(comps[2].a_mass[0] == 8);  // {g,h,i}

  CHECK_THROWS_AS(
      recover_components(11, {total}, {{1, 9, {Rat(1)}}, {5, 12, {Rat(1)}}}),
      CorruptLabelError);
}

TEST_CASE("recover_components agrees with union-find on random trees") {
  Rng rng(555);
  for (int it = 0; it < 300; ++it) {
    int n = 2 + (int)rng.below(29);
    Graph g = random_tree(rng, n);
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    ClusterTree t = build_cluster_tree(g, all);
    NodeWeighting a;
    for (int v = 0; v < n; ++v) a.set(v, Rat((long)rng.below(6)));
    std::vector<std::pair<int, int>> failed;  // (child, parent)
    for (const auto& [child, pe] : t.parent)
      if (rng.below(4) == 0) failed.push_back({child, pe.first});
    std::vector<SubtreeRecord> recs;
    for (auto [child, parent] : failed) {
      SubtreeRecord r;
      r.start = t.tour.start.at(child);
      r.end = t.tour.end.at(child);
      std::set<int> seen(t.tour.seq.begin() + r.start, t.tour.seq.begin() + r.end + 1);
      Rat sum = 0;
      for (int v : seen) sum += a.value(v);
      r.a_sub = {sum};
      recs.push_back(r);
    }
    auto comps = recover_components(n, {a.total()}, recs);

    UnionFind uf(n);
    std::set<std::pair<int, int>> failset;
    for (auto [c, p] : failed) failset.insert({c, p});
    for (const auto& [child, pe] : t.parent)
      if (!failset.count({child, pe.first})) uf.unite(child, pe.first);
    std::map<int, int> comp_of;
    for (int v = 0; v < n; ++v)
      comp_of[v] = locate_component(comps, t.tour.start.at(v));
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        CHECK((uf.find(u) == uf.find(v)) == (comp_of[u] == comp_of[v]));
    std::map<int, Rat> mass;
    for (int v = 0; v < n; ++v) mass[comp_of[v]] += a.value(v);
    for (auto& [ci, m] : mass) CHECK(comps[ci].a_mass[0] == m);
  }
}

TEST_CASE("lemma coverage: light components are covered by inbound intervals") {
  Rng rng(777);
  int done = 0;
  while (done < 1000) {
    int n = 2 + (int)rng.below(39);
    Graph g = random_tree(rng, n);
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    ClusterTree t = build_cluster_tree(g, all);
    NodeWeighting a;
    for (int v = 0; v < n; ++v) a.set(v, Rat((long)rng.below(5)));
    std::set<std::pair<int, int>> failset;  // (child, parent)
    for (const auto& [child, pe] : t.parent)
      if (rng.below(3) == 0) failset.insert({child, pe.first});
    if (failset.empty()) continue;

    UnionFind uf(n);
    for (const auto& [child, pe] : t.parent)
      if (!failset.count({child, pe.first})) uf.unite(child, pe.first);
    Rat tau = Rat((long)rng.below(10));
    std::map<int, std::vector<int>> comp_members;
    for (int v = 0; v < n; ++v) comp_members[uf.find(v)].push_back(v);
    for (auto& [root, members] : comp_members) {
      Rat mass = 0;
      for (int v : members) mass += a.value(v);
      if (mass > tau) continue;
      // every failed edge with one side in C, oriented into C
      std::set<int> covered;
      bool any_into = false;
      for (auto [child, parent] : failset) {
        int into = -1, from = -1;
        if (uf.find(child) == root) { into = child; from = parent; }
        else if (uf.find(parent) == root) { into = parent; from = child; }
        else continue;
        any_into = true;
        int tpos = t.tour.pos.at({from, into});
        int tend = maximal_interval(t.tour, tpos, a, tau);
        for (int i = tpos; i < tend; ++i) covered.insert(t.tour.at(i));
      }
      if (!any_into) continue;  // the component containing the tour root
      for (int v : members) CHECK(covered.count(v));
      ++done;
    }
  }
}
