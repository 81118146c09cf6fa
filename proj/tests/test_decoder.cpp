#include "ftl/decoder.hpp"

#include "doctest.h"
#include "ftl/harness.hpp"
#include "test_util.hpp"

using namespace ftl;
using ftl_test::Rng;

namespace {

// hand-built single-scale store over a path 0-1-2-3 with one cluster
// S = {0,1,2,3}, tree = the path rooted at 0, tour (0,1,2,3,2,1,0);
// A_0 = 2 per vertex, A_1 = 0; tree edge {1,2} is edge id 1
struct Synthetic {
  LabelParams params;
  std::vector<ScaleParams> sp;
  ClusterId cid;
  VLabel v0, v3;
  ELabel e1;

  VertexFingerprint fp(int v) const {
    static const int start[] = {0, 1, 2, 3};
    static const int end[] = {6, 5, 4, 3};
    static const long asub[] = {8, 6, 4, 2};
    VertexFingerprint f;
    f.vertex = v;
    FingerprintClusterEntry e;
    e.cluster = cid;
    e.levels = {0};
    e.cluster_size = 4;
    e.start = start[v];
    e.end = end[v];
    e.a_cluster = {Rat(8), Rat(0)};
    e.a_subtree = {Rat(asub[v]), Rat(0)};
    f.entries.push_back(e);
    return f;
  }

  explicit Synthetic(const Rat& tau_heavy) {
    params.s_nc = 2;
    params.s_ed = 100;
    params.d = 1;
    params.f = 1;
    ScaleParams s;
    s.i = 0;
    s.h = 1;
    s.h_cov = 2;
    s.h_diam = 4;
    s.h_ed = 8;
    s.hs_ed = 800;
    s.tau_hit = Rat(1, 2400);
    s.tau_heavy = tau_heavy;
    s.phi = Rat(1, 2);
    sp = {s};
    cid = cluster_id_of({0, 1, 2, 3});

    v0.vertex = 0;
    v0.scales.resize(1);
    v0.scales[0].self = fp(0);
    v3.vertex = 3;
    v3.scales.resize(1);
    v3.scales[0].self = fp(3);

    e1.edge_id = 1;
    e1.scales.resize(1);
    ScaleELabel& se = e1.scales[0];
    se.self.edge_id = 1;
    se.self.u = 1;
    se.self.v = 2;
    se.self.length = 1;
    se.self.fu = fp(1);
    se.self.fv = fp(2);
    ELabelClusterBlock blk;
    blk.cluster = cid;
    blk.levels = {0};
    blk.cluster_size = 4;
    blk.fwd_pos = 2;
    blk.bwd_pos = 4;
    for (int j = 0; j <= 1; ++j) {
      blk.fwd.push_back({j, 2, 2, {}});
      blk.bwd.push_back({j, 4, 4, {}});
    }
    se.clusters.push_back(blk);
  }
};

}  // namespace

TEST_CASE("extract_waypoints: endpoints plus stored vertex labels") {
  Synthetic syn{Rat(1)};
  CHECK(extract_waypoints(syn.v0, syn.v3, {}) == std::set<int>{0, 3});
  CHECK(extract_waypoints(syn.v0, syn.v0, {}) == std::set<int>{0});
  ELabel with_vl = syn.e1;
  with_vl.endpoint_vlabels[1] = syn.v0;  // embedded label of vertex 1
  with_vl.endpoint_vlabels[1].vertex = 1;
  std::vector<const ELabel*> failed{&with_vl};
  CHECK(extract_waypoints(syn.v0, syn.v3, failed) == std::set<int>{0, 1, 3});
}

TEST_CASE("packed graph: heavy components are bridged by the 4-hop portal path") {
  Synthetic syn{Rat(1)};  // both components A_0-heavy (mass 4 > 1)
  Decoder dec(syn.params, syn.sp);
  dec.set_failures({&syn.e1});
  QueryResult r = dec.query(syn.v0, syn.v3);
  REQUIRE(!r.unreachable);
  // 0 -pi(C0)- h_diam, four portal quarters summing to h_ed s_ed + 2 h_diam,
  // then pi(C1)- 3: 4 + (800 + 8) + 4
  CHECK(r.estimate == 816);
  CHECK(dec.packed_distance(syn.v0, syn.v3) ==
        dec.unpacked_distance(syn.v0, syn.v3));
}

TEST_CASE("packed graph: light components expose only stored edges") {
  Synthetic syn{Rat(10)};  // both components light (mass 4 <= 10), nothing stored
  Decoder dec(syn.params, syn.sp);
  dec.set_failures({&syn.e1});
  QueryResult r = dec.query(syn.v0, syn.v3);
  CHECK(r.unreachable);
  // same endpoints inside one component stay connected via the component hub
  QueryResult r2 = dec.query(syn.v0, syn.v0);
  CHECK(!r2.unreachable);
  CHECK(r2.estimate == 0);
}

TEST_CASE("decoder: non-laminar intervals raise a corrupt-label error") {
  Synthetic syn{Rat(1)};
  ELabel bad = syn.e1;
  // make the child intervals overlap rather than nest
  bad.scales[0].self.fu.entries[0].start = 1;
  bad.scales[0].self.fu.entries[0].end = 3;
  bad.scales[0].self.fv.entries[0].start = 2;
  bad.scales[0].self.fv.entries[0].end = 4;
  Decoder dec(syn.params, syn.sp);
  CHECK_THROWS_AS(dec.set_failures({&bad}), CorruptLabelError);
}

TEST_CASE("decoder: over-budget failure sets are rejected") {
  Synthetic syn{Rat(1)};
  Decoder dec(syn.params, syn.sp);
  ELabel other = syn.e1;
  other.edge_id = 2;
  CHECK_THROWS_AS(dec.set_failures({&syn.e1, &other}), UsageError);
}

TEST_CASE("end-to-end: adjacency, identity, unreachable on real labels") {
  Graph g(3, {{0, 0, 1, 3, Rat(1)}, {1, 1, 2, 1, Rat(1)}});
  LabelParams p;
  LabelScheme scheme = build_labels(g, p);
  LabelStore store = store_from_scheme(scheme);

  QueryResult adj = decode_query(store, 0, 1, {});
  REQUIRE(!adj.unreachable);
  CHECK(adj.estimate <= 3 * p.stretch());
  CHECK(adj.estimate >= 3);

  CHECK(decode_query(store, 1, 1, {}).estimate == 0);

  // failing the only 0-1 edge disconnects the pair, exactly
  QueryResult cut = decode_query(store, 0, 1, {0});
  CHECK(cut.unreachable);
  QueryResult keep = decode_query(store, 1, 2, {0});
  CHECK(!keep.unreachable);

  CHECK_THROWS_AS(decode_query(store, 0, 1, {99}), UsageError);
}

TEST_CASE("mini sweep: soundness and stretch against brute force") {
  Rng rng(99);
  for (int gi = 0; gi < 3; ++gi) {
    Graph g = generate_graph(1000 + gi, 3, 7, 10, 4);
    LabelParams p;
    LabelScheme scheme = build_labels(g, p);
    LabelStore store = store_from_scheme(scheme);
    Decoder dec(store);
    std::vector<std::vector<int>> fsets{{}};
    for (const Edge& e : g.edges()) fsets.push_back({e.id});
    for (int x = 0; x < g.m(); ++x)
      if (rng.below(2)) fsets.push_back({g.edge(x).id, g.edge((x + 1) % g.m()).id});
    for (const auto& fs : fsets) {
      std::vector<const ELabel*> failed;
      for (int id : fs) failed.push_back(&store.elabels.at(id));
      dec.set_failures(failed);
      for (int u = 0; u < g.n(); ++u)
        for (int v = u + 1; v < g.n(); ++v) {
          Len truth = brute_distance(g, fs, u, v);
          QueryResult qr = dec.query(store.vlabels.at(u), store.vlabels.at(v));
          if (truth == kInfLen) {
            CHECK(qr.unreachable);
          } else {
            REQUIRE(!qr.unreachable);
            CHECK(qr.estimate >= truth);
            CHECK(qr.estimate <= p.stretch() * truth);
          }
        }
    }
  }
}
