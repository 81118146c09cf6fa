#include "ftl/flow.hpp"

#include <cmath>
#include <map>

#include "doctest.h"
#include "test_util.hpp"

using namespace ftl;
using ftl_test::Rng;

namespace {

Graph single_edge() { return Graph(2, {{0, 0, 1, 1, Rat(1)}}); }

Graph four_cycle() {
  return Graph(4, {{0, 0, 1, 1, Rat(1)},
                   {1, 1, 2, 1, Rat(1)},
                   {2, 2, 3, 1, Rat(1)},
                   {3, 3, 0, 1, Rat(1)}});
}

Graph k4() {
  std::vector<Edge> es;
  int id = 0;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) es.push_back({id++, u, v, 1, Rat(1)});
  return Graph(4, std::move(es));
}

// two unit triangles joined by one unit-capacity bridge 2-3
Graph bridge_graph() {
  return Graph(6, {{0, 0, 1, 1, Rat(1)},
                   {1, 0, 2, 1, Rat(1)},
                   {2, 1, 2, 1, Rat(1)},
                   {3, 2, 3, 1, Rat(1)},
                   {4, 3, 4, 1, Rat(1)},
                   {5, 3, 5, 1, Rat(1)},
                   {6, 4, 5, 1, Rat(1)}});
}

Rat flow_edge_congestion(const Graph& g, const RoutingResult& r, int edge_id) {
  Rat load = 0;
  for (const FlowPath& fp : r.flow)
    for (int id : fp.edge_ids)
      if (id == edge_id) load += fp.value;
  return load / g.edge_by_id(edge_id)->capacity;
}

void check_routing_invariants(const Graph& g, const Demand& d, Len h,
                              const RoutingResult& r) {
  REQUIRE(r.feasible);
  std::map<std::pair<int, int>, Rat> routed;
  for (const FlowPath& fp : r.flow) {
    Len len = 0;
    for (int id : fp.edge_ids) len += g.edge_by_id(id)->length;
    CHECK(len <= h);
    auto key = std::minmax(fp.u, fp.v);
    routed[{key.first, key.second}] += fp.value;
  }
  for (const Edge& e : g.edges())
    CHECK(flow_edge_congestion(g, r, e.id) <= r.congestion);
  std::map<std::pair<int, int>, Rat> want;
  for (const auto& [p, x] : d.values) {
    if (p.first == p.second) continue;
    auto key = std::minmax(p.first, p.second);
    want[{key.first, key.second}] += x;
  }
  CHECK(routed == want);
}

}  // namespace

TEST_CASE("route_lp: one edge, one unit of demand") {
  Graph g = single_edge();
  Demand d;
  d.length_bound = 1;
  d.add(0, 1, Rat(1));
  RoutingResult r = route_lp(g, d, 1);
  REQUIRE(r.feasible);
  CHECK(r.congestion == 1);
  check_routing_invariants(g, d, 1, r);

  RoutingResult r0 = route_lp(g, d, 0);
  CHECK(!r0.feasible);
}

TEST_CASE("route_lp: 4-cycle splits across the two disjoint paths") {
  Graph g = four_cycle();
  Demand d;
  d.length_bound = 4;
  d.add(0, 2, Rat(1));
  RoutingResult r = route_lp(g, d, 4);
  REQUIRE(r.feasible);
  // hand LP over the two 2-hop paths: even split, congestion 1/2
  CHECK(r.congestion == Rat(1, 2));
  check_routing_invariants(g, d, 4, r);
}

TEST_CASE("ldd_demand: formula, zero weighting, load within A") {
  // one cluster {0,1}, omega = 1, A = 1 everywhere
  Graph g = single_edge();
  NeighborhoodCover nc;
  nc.h_cov = 1;
  nc.h_diam = 2;
  nc.clusterings.push_back({{{0, 1}}});
  NodeWeighting ones;
  ones.set(0, Rat(1));
  ones.set(1, Rat(1));
  Demand d = ldd_demand(ones, nc);
  CHECK(d.value(0, 1) == Rat(1, 4));  // A(u)A(v) / 2A(S)
  CHECK(d.value(1, 0) == Rat(1, 4));
  CHECK(d.value(0, 0) == Rat(1, 4));
  CHECK(d.load().leq(ones));

  NodeWeighting zero;
  CHECK(ldd_demand(zero, nc).is_zero());

  // two-clustering cover, omega = 2: load still within A
  NeighborhoodCover nc2 = nc;
  nc2.clusterings.push_back({{{0}, {1}}});
  Demand d2 = ldd_demand(ones, nc2);
  CHECK(d2.respects(ones));
  // summing loads explicitly
  Rat l0 = 0;
  for (const auto& [p, x] : d2.values) {
    if (p.first == 0) l0 += x;
    if (p.second == 0) l0 += x;
  }
  CHECK(l0 == d2.load().value(0));
  CHECK(l0 <= 1);
}

TEST_CASE("cut_or_certify: expander certificate on K4") {
  Graph g = k4();
  NodeWeighting a = deg_weighting(g);
  Rat phi(1, 1000);
  CutCertificate c = cut_or_certify(g, a, 4, 100, 10, phi);
  REQUIRE(c.certified);
  // independent check: route the LDD demand of a fresh cover by exact LP and
  // confirm the congestion budget of the certificate
  NeighborhoodCover nc = build_cover(g, 4, 10);
  Demand ldd = ldd_demand(a, nc);
  RoutingResult r = route_lp(g, ldd, (4 * 100) / 4);
  REQUIRE(r.feasible);
  CHECK(r.congestion <= Rat(1) / (4 * nc.width() * phi));
  CHECK(c.expansion.congestion <= c.expansion.gamma);
}

TEST_CASE("cut_or_certify: zero weighting certifies vacuously") {
  Graph g = bridge_graph();
  NodeWeighting zero;
  CutCertificate c = cut_or_certify(g, zero, 1, 100, 10, Rat(1, 2));
  CHECK(c.certified);
}

TEST_CASE("cut_or_certify: bridge cut with verified witness") {
  Graph g = bridge_graph();
  NodeWeighting a = deg_weighting(g);
  Rat phi(1, 5);
  CutCertificate c = cut_or_certify(g, a, 1, 100, 10, phi);
  REQUIRE(!c.certified);
  REQUIRE(!c.cut.is_zero());
  CHECK(c.cut.on_grid());
  CHECK(c.cut.within_unit());
  // concentrated on the bridge
  CHECK(c.cut.value(3) == 1);
  CHECK(c.cut.values.size() == 1);
  // witness is A-respecting, (h s')-length, and the measured sparsity bound holds
  CHECK(c.witness.respects(a));
  for (const auto& [p, x] : c.witness.values)
    CHECK(graph_dist(g, p.first, p.second) <= 1 * 10);
  DemandStats st = demand_stats(c.cut, c.witness, g, 100);
  REQUIRE(!st.sparsity_infinite);
  CHECK(st.sparsity <= c.phi_prime);
  CHECK(c.phi_prime == Rat(2, 7));  // |C| = 1 against 7/2 separated demand
}

TEST_CASE("cut_until_certify: already-expanding input returns a zero cut") {
  Graph g = k4();
  NodeWeighting a = deg_weighting(g);
  CutUntilCertifyResult r = cut_until_certify(g, a, 4, 100, Rat(1, 1000), CutMode::kPoly);
  CHECK(r.cut.is_zero());
  CHECK(r.nonzero_rounds == 0);
}

TEST_CASE("cut_until_certify: bridge accumulates, final certificate re-verified") {
  Graph g = bridge_graph();
  NodeWeighting a = deg_weighting(g);
  Rat phi(1, 5);
  CutUntilCertifyResult r = cut_until_certify(g, a, 1, 100, phi, CutMode::kPoly);
  CHECK(!r.cut.is_zero());
  CHECK(r.cut.value(3) > 0);  // bridge inflated
  CHECK(r.nonzero_rounds <= 6 * 5 / 2);
  // independent re-verification: fresh cover + LDD routing within budget on g - C
  Graph cut_g = apply_cut(g, r.cut, 100);
  CutCertificate again = cut_or_certify(cut_g, a, 1, 100, 10, phi);
  CHECK(again.certified);
  // and explicitly via route_lp
  NeighborhoodCover nc = build_cover(cut_g, 1, 10);
  Demand ldd = ldd_demand(a, nc);
  RoutingResult rr = route_lp(cut_g, ldd, 100 / 4);
  REQUIRE(rr.feasible);
  CHECK(rr.congestion <= Rat(1) / (4 * nc.width() * phi));
}

TEST_CASE("union_cut_diagnostic: empty, single cut, bridge sequence") {
  Graph g = bridge_graph();
  NodeWeighting a = deg_weighting(g);

  UnionCutReport r0 = union_cut_diagnostic(g, a, {}, 1, 100);
  CHECK(r0.sum_size_over_phi == 0);
  CHECK(r0.potentials.size() == 1);
  CHECK(r0.monotone);

  MovingCut c;
  c.h = 100;
  c.set(3, Rat(1));
  UnionCutReport r1 = union_cut_diagnostic(g, a, {{c, Rat(1, 5)}}, 1, 100);
  REQUIRE(r1.potentials.size() == 2);
  CHECK(r1.monotone);
  CHECK(r1.potentials[0] >= r1.potentials[1] - 1e-9);
  CHECK(r1.sum_size_over_phi == 5);

  CutUntilCertifyResult cr = cut_until_certify(g, a, 1, 100, Rat(1, 5), CutMode::kPoly);
  UnionCutReport r2 = union_cut_diagnostic(g, a, cr.increments, 1, 100);
  CHECK(r2.monotone);
  CHECK(r2.potentials.size() == cr.increments.size() + 1);
  for (double p : r2.potentials) CHECK(std::isfinite(p));
  CHECK(r2.sum_size_over_phi >= 0);
  CHECK(r2.a_total_ln_n > 0);
}

TEST_CASE("route_lp invariants on random instances") {
  Rng rng(4242);
  for (int it = 0; it < 25; ++it) {
    int n = 3 + (int)rng.below(5);
    Graph g = ftl_test::random_graph(rng, n, 4, 3);
    Demand d;
    Len h = (Len)rng.range(3, 12);
    d.length_bound = h;
    for (int t = 0; t < 3; ++t) {
      int u = (int)rng.below((uint64_t)n), v = (int)rng.below((uint64_t)n);
      if (u == v) continue;
      if (graph_dist(g, u, v) > h) continue;
      d.add(u, v, Rat(1 + (long)rng.below(2)));
    }
    if (d.is_zero()) continue;
    RoutingResult r = route_lp(g, d, h);
    check_routing_invariants(g, d, h, r);
  }
}
