#include "ftl/labels.hpp"

#include <numeric>

#include "doctest.h"
#include "ftl/store.hpp"
#include "test_util.hpp"

using namespace ftl;
using ftl_test::Rng;

namespace {

Graph bridge_graph() {
  return Graph(6, {{0, 0, 1, 1, Rat(1)},
                   {1, 0, 2, 1, Rat(1)},
                   {2, 1, 2, 1, Rat(1)},
                   {3, 2, 3, 1, Rat(1)},
                   {4, 3, 4, 1, Rat(1)},
                   {5, 3, 5, 1, Rat(1)},
                   {6, 4, 5, 1, Rat(1)}});
}

LabelParams quick_params() {
  LabelParams p;
  p.s_nc = 2;
  p.s_ed = 100;
  p.d = 2;
  p.f = 2;
  return p;
}

}  // namespace

TEST_CASE("scale params: tau_hit and the length ladder") {
  Graph g = bridge_graph();
  LabelParams p;
  p.s_nc = 2;
  p.s_ed = 100;
  p.d = 1;
  p.f = 1;
  ScaleParams sp = make_scale_params(g, 3, p, Rat(1, 100));
  CHECK(sp.h == 8);
  CHECK(sp.h_cov == 16);
  CHECK(sp.h_diam == 32);   // 2h s_nc
  CHECK(sp.h_ed == 64);     // 4h s_nc
  CHECK(sp.hs_ed == 6400);  // h_ed s_ed
  // tau_hit = h/(h_ed s_ed (2f+1) d) = 1/2400
  CHECK(sp.tau_hit == Rat(1, 2400));
  // the portal quarter-length identity: 4 * (h snc (s_ed+1)) = h_ed s_ed + 2 h_diam
  Len portal = sp.h * p.s_nc * ((Len)p.s_ed + 1);
  CHECK(4 * portal == sp.h_ed * (Len)p.s_ed + 2 * sp.h_diam);
}

TEST_CASE("labels: depth zero is rejected") {
  Graph g = bridge_graph();
  LabelParams p = quick_params();
  p.d = 0;
  CHECK_THROWS_AS(build_scale_structures(g, 0, p), UsageError);
}

TEST_CASE("derived graphs apply all higher-level cuts") {
  Graph g = bridge_graph();
  LabelParams p = quick_params();
  p.phi_override = Rat(1, 5);  // tight: the bridge gets cut at small scales
  ScaleBundle b = build_scale_structures(g, 0, p);
  // G_d is the base graph
  for (int ei = 0; ei < g.m(); ++ei)
    CHECK(b.derived[p.d].edge(ei).length == g.edge(ei).length);
  // G_j adds hs_ed * C_{j'} for all j' > j
  for (int j = 0; j < p.d; ++j) {
    MovingCut sum;
    sum.h = b.params.hs_ed;
    for (int jp = j + 1; jp <= p.d; ++jp) sum.add(b.hier.cuts[jp]);
    for (const Edge& e : g.edges()) {
      Rat expect = rat_len(e.length) + sum.value(e.id) * rat_len(b.params.hs_ed);
      CHECK(rat_len(b.derived[j].edge_by_id(e.id)->length) == expect);
    }
  }
  // the bridge cut at level 1 inflates G_0 by hs_ed * C_1(bridge)
  if (!b.hier.cuts[1].is_zero()) {
    Rat c = b.hier.cuts[1].value(3);
    if (c == Rat(1, 2))
      CHECK(b.derived[0].edge_by_id(3)->length == 1 + b.params.hs_ed / 2);
  }
}

TEST_CASE("assemble: isolated vertex stores only its fingerprints") {
  std::vector<Edge> es{{0, 0, 1, 1, Rat(1)}};
  Graph g(3, std::move(es));  // vertex 2 isolated
  LabelScheme scheme = build_labels(g, quick_params());
  const VLabel& vl = scheme.vlabels.at(2);
  for (const auto& s : vl.scales) {
    CHECK(s.self.vertex == 2);
    CHECK(!s.self.entries.empty());  // singleton cluster fingerprint
    CHECK(s.stored_edges.empty());
  }
}

TEST_CASE("assemble: an edge outside every cluster tree stays trivial") {
  // star plus a heavier 1-2 edge; trees are stars from the lowest id, so the
  // (1,2) endpoints never form a tree edge
  Graph g(4, {{0, 0, 1, 1, Rat(1)},
              {1, 0, 2, 1, Rat(1)},
              {2, 0, 3, 1, Rat(1)},
              {3, 1, 2, 2, Rat(1)}});
  LabelScheme scheme = build_labels(g, quick_params());
  CHECK(scheme.elabels.at(3).trivial());
  CHECK(!scheme.elabels.at(0).trivial());
  CHECK(scheme.nontrivial_elabels <= scheme.cluster_size_bound);
}

TEST_CASE("assemble: parallel edges of a tree edge get the tree data") {
  Graph g(3, {{0, 0, 1, 1, Rat(1)},
              {1, 0, 1, 4, Rat(1)},  // parallel to the tree edge
              {2, 1, 2, 1, Rat(1)}});
  LabelScheme scheme = build_labels(g, quick_params());
  CHECK(!scheme.elabels.at(0).trivial());
  CHECK(!scheme.elabels.at(1).trivial());  // endpoint-matched
}

TEST_CASE("vertex labels store sampled edges of light clusters") {
  Graph g = bridge_graph();
  LabelScheme scheme = build_labels(g, quick_params());
  // desk-scale tau_heavy is large: every cluster is light, so every vertex
  // label stores the L_0 = E edges incident to each cluster containing it
  const ScaleBundle& b = scheme.bundles[0];
  for (int v = 0; v < g.n(); ++v) {
    const ScaleVLabel& sv = scheme.vlabels.at(v).scales[0];
    std::set<int> stored;
    for (const auto& fp : sv.stored_edges) stored.insert(fp.edge_id);
    for (const ClusterEntry& ce : b.clusters) {
      if (!std::binary_search(ce.vertices.begin(), ce.vertices.end(), v)) continue;
      if (b.hier.levels[0].sum_over(ce.vertices) > b.params.tau_heavy) continue;
      for (int w : ce.vertices)
        for (int ei : g.incident(w)) CHECK(stored.count(g.edge(ei).id));
    }
  }
}

TEST_CASE("light components have all sampled incident edges stored (replay)") {
  Rng rng(2024);
  Graph g = bridge_graph();
  LabelScheme scheme = build_labels(g, quick_params());
  for (const ScaleBundle& b : scheme.bundles) {
    for (const ClusterEntry& ce : b.clusters) {
      if (ce.tree.parent.empty()) continue;
      // sample failed tree-edge subsets
      std::vector<std::pair<int, int>> tree_edges;
      for (const auto& [child, pe] : ce.tree.parent)
        tree_edges.push_back({child, pe.first});
      for (int trial = 0; trial < 3; ++trial) {
        std::set<std::pair<int, int>> failed;
        for (auto& te : tree_edges)
          if (rng.below(3) == 0) failed.insert(te);
        if (failed.empty()) continue;
        // components of T_S minus failed
        std::map<int, int> comp;
        std::function<int(int)> find = [&](int x) {
          return comp[x] == x ? x : comp[x] = find(comp[x]);
        };
        for (int v : ce.vertices) comp[v] = v;
        for (auto& [child, parent] : tree_edges)
          if (!failed.count({child, parent})) comp[find(child)] = find(parent);
        for (int j = 0; j <= scheme.params.d; ++j) {
          std::map<int, Rat> mass;
          for (int v : ce.vertices) mass[find(v)] += b.hier.levels[j].value(v);
          for (auto& [root, m] : mass) {
            if (m > b.params.tau_heavy) continue;
            // light: sampled edges incident to the component must be stored
            // in the windows of the failed edges oriented into it
            std::set<int> want;
            for (int v : ce.vertices) {
              if (find(v) != root) continue;
              for (int ei : g.incident(v))
                if (b.sampled[j].count(g.edge(ei).id)) want.insert(g.edge(ei).id);
            }
            if (want.empty()) continue;
            std::set<int> got;
            bool inbound = false;
            for (auto [child, parent] : failed) {
              int into, from;
              if (find(child) == root) { into = child; from = parent; }
              else if (find(parent) == root) { into = parent; from = child; }
              else continue;
              inbound = true;
              int tpos = ce.tree.tour.pos.at({from, into});
              int tend =
                  maximal_interval(ce.tree.tour, tpos, b.hier.levels[j], b.params.tau_heavy);
              for (int t = tpos; t < tend; ++t) {
                int v = ce.tree.tour.at(t);
                for (int ei : g.incident(v))
                  if (b.sampled[j].count(g.edge(ei).id)) got.insert(g.edge(ei).id);
              }
            }
            if (!inbound) continue;  // root-side component
            for (int id : want) CHECK(got.count(id));
          }
        }
      }
    }
  }
}

TEST_CASE("store: round trip, truncation, magic/version errors") {
  Rng rng(5150);
  Graph g = ftl_test::random_graph(rng, 5, 4, 4);
  g.set_declared_length_bound(4);
  LabelScheme scheme = build_labels(g, quick_params());
  LabelStore st = store_from_scheme(scheme);
  std::vector<uint8_t> bytes = serialize_store(st);
  LabelStore rt = deserialize_store(bytes);
  CHECK(serialize_store(rt) == bytes);

  std::vector<uint8_t> truncated(bytes.begin(), bytes.begin() + bytes.size() / 2);
  CHECK_THROWS_AS(deserialize_store(truncated), ParseError);

  std::vector<uint8_t> bad = bytes;
  bad[0] ^= 0xff;  // magic
  CHECK_THROWS_AS(deserialize_store(bad), ParseError);
  // version bump
  std::vector<uint8_t> vbad = bytes;
  ByteReader probe(vbad);
  probe.u64();
  size_t voff = probe.offset();
  vbad[voff] = 0x7e;
  CHECK_THROWS_AS(deserialize_store(vbad), ParseError);

  // the size report is consistent with the template bound
  LabelSizeReport sz = measure_labels(scheme);
  CHECK(sz.nontrivial_elabels == scheme.nontrivial_elabels);
  CHECK(sz.total_expanded_elabel >= sz.total_elabel_bytes);
}
