#include "ftl/labels.hpp"

#include <algorithm>
#include <cmath>

#include "ftl/hitting.hpp"

namespace ftl {

ClusterId cluster_id_of(const std::vector<int>& sorted_vertices) {
  // FNV-1a over the sorted vertex list
  unsigned long long h = 1469598103934665603ULL;
  for (int v : sorted_vertices) {
    for (int b = 0; b < 4; ++b) {
      h ^= (unsigned long long)((v >> (8 * b)) & 0xff);
      h *= 1099511628211ULL;
    }
  }
  return h;
}

const FingerprintClusterEntry* VertexFingerprint::find(ClusterId c) const {
  for (const auto& e : entries)
    if (e.cluster == c) return &e;
  return nullptr;
}

bool ELabel::trivial() const {
  for (const auto& s : scales)
    if (!s.empty()) return false;
  return true;
}

int scale_count(const Graph& g) {
  long long nl = std::max<long long>(1, (long long)g.n() * g.declared_length_bound());
  int i_max = 0;
  while ((1LL << i_max) < nl) ++i_max;
  return i_max + 1;
}

ScaleParams make_scale_params(const Graph& g, int i, const LabelParams& p,
                              const Rat& phi) {
  ScaleParams sp;
  sp.i = i;
  sp.h = 1LL << i;
  sp.h_cov = 2 * sp.h;
  sp.h_diam = sp.h_cov * p.s_nc;
  sp.h_ed = 2 * sp.h_diam;
  sp.hs_ed = sp.h_ed * (Len)p.s_ed;
  sp.phi = phi;
  // tau_hit = h / (h_ed s_ed (2f+1) d) = 1 / (4 s_nc s_ed (2f+1) d)
  sp.tau_hit = Rat(1) / (Rat(4) * p.s_nc * rat_len(p.s_ed) * (2 * p.f + 1) * p.d);
  if (g.n() <= 1 || p.f == 0) {
    sp.tau_heavy = 0;
  } else {
    Rat log_term = rat_upper_fixed(p.c_tau * std::log((double)g.n()));
    sp.tau_heavy = Rat(p.f) * g.max_capacity() * Rat(rat_ceil(log_term / phi));
  }
  return sp;
}

namespace {

// Certificates backing the tau_heavy routing property: for each j in 0..d,
// any h_ed-length A_j-respecting demand routes in G - C_{j+1} with
// congestion 1/(2 phi) and length h_ed s_ed (LDD certificate plus the
// cover-transfer argument), or |A_j| <= 1 and shortest paths suffice.
std::vector<HierarchyCheck> certify_levels(const Graph& g, const Hierarchy& hier,
                                           const FlowOpts& flow) {
  std::vector<HierarchyCheck> out;
  for (int j = 0; j <= hier.d; ++j) {
    const NodeWeighting& aj = hier.levels[j];
    HierarchyCheck c;
    c.name = "tau_heavy routing, level " + std::to_string(j);
    if (aj.total() <= 1) {
      c.pass = true;
      c.detail = "|A_j| <= 1";
      out.push_back(std::move(c));
      continue;
    }
    Graph host = (j < hier.d) ? hier.with_cut_applied(j + 1) : g;
    long long s_prime = (long long)std::floor(std::sqrt((double)hier.s_ed));
    while (s_prime * s_prime > hier.s_ed) --s_prime;
    CutCertificate r =
        cut_or_certify(host, aj, hier.h, hier.s_ed, s_prime, hier.phi, flow);
    c.pass = r.certified;
    c.detail = r.certified ? "LDD routed within budget" : "not expanding";
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

ScaleBundle build_scale_structures(const Graph& g, int i, const LabelParams& p) {
  if (p.d < 1) throw UsageError("labels: depth d must be >= 1");
  if (p.s_nc < 2) throw UsageError("labels: s_nc must be >= 2");
  if (p.s_ed < 100) throw UsageError("labels: s_ed must be >= 100");
  ScaleBundle b;
  Len h = 1LL << i;
  Len h_ed = 4 * h * p.s_nc;
  b.hier = build_hierarchy(g, deg_weighting(g), h_ed, p.s_ed, p.d, p.phi_override,
                           CutMode::kPoly, p.flow);
  b.params = make_scale_params(g, i, p, b.hier.phi);

  // derived graphs G_j: original lengths plus all higher-level cuts
  b.derived.resize(p.d + 1);
  for (int j = 0; j <= p.d; ++j) {
    MovingCut sum;
    sum.h = b.params.hs_ed;
    for (int jp = j + 1; jp <= p.d; ++jp) sum.add(b.hier.cuts[jp]);
    b.derived[j] = sum.is_zero() ? g : apply_cut(g, sum, b.params.hs_ed);
  }

  for (int j = 0; j <= p.d; ++j) {
    b.covers.push_back(build_cover(b.derived[j], b.params.h_cov, p.s_nc, p.c_omega));
    for (const Clustering& cl : b.covers[j].clusterings) {
      for (const auto& s : cl.clusters) {
        ClusterId id = cluster_id_of(s);
        auto it = b.cluster_index.find(id);
        if (it != b.cluster_index.end()) {
          ClusterEntry& ce = b.clusters[it->second];
          if (ce.vertices != s)
            throw ConstructionError("labels: cluster id collision");
          if (ce.levels.back() != j) ce.levels.push_back(j);
          continue;
        }
        ClusterEntry ce;
        ce.id = id;
        ce.vertices = s;
        ce.levels = {j};
        ce.min_level = j;
        ce.tree = build_cluster_tree(b.derived[j], s);
        b.cluster_index[id] = (int)b.clusters.size();
        b.clusters.push_back(std::move(ce));
      }
    }
  }

  b.sampled.resize(p.d + 1);
  for (const Edge& e : g.edges()) b.sampled[0].insert(e.id);
  std::vector<const ClusterTree*> trees;
  for (const ClusterEntry& ce : b.clusters) trees.push_back(&ce.tree);
  for (int j = 1; j <= p.d; ++j) {
    ConstraintSystem cs =
        build_constraints(g, b.hier.cuts[j], b.hier.levels[j], trees,
                          b.params.tau_hit, b.params.tau_heavy);
    b.sampled[j] = derandomized_select(cs).selected;
  }

  b.level_certs = certify_levels(g, b.hier, p.flow);
  for (const auto& c : b.level_certs)
    if (!c.pass)
      throw ConstructionError("labels: level routing certification failed (" +
                              c.name + ")");
  return b;
}

namespace {

std::vector<Rat> level_sums(const Hierarchy& hier, const std::vector<int>& vs) {
  std::vector<Rat> out(hier.d + 1);
  for (int j = 0; j <= hier.d; ++j) out[j] = hier.levels[j].sum_over(vs);
  return out;
}

VertexFingerprint fingerprint_of(const ScaleBundle& b, int v) {
  VertexFingerprint fp;
  fp.vertex = v;
  for (const ClusterEntry& ce : b.clusters) {
    if (!std::binary_search(ce.vertices.begin(), ce.vertices.end(), v)) continue;
    FingerprintClusterEntry e;
    e.cluster = ce.id;
    e.levels = ce.levels;
    e.cluster_size = (int)ce.vertices.size();
    e.start = ce.tree.tour.start.at(v);
    e.end = ce.tree.tour.end.at(v);
    e.a_cluster = level_sums(b.hier, ce.vertices);
    std::set<int> sub(ce.tree.tour.seq.begin() + e.start,
                      ce.tree.tour.seq.begin() + e.end + 1);
    std::vector<int> subv(sub.begin(), sub.end());
    e.a_subtree = level_sums(b.hier, subv);
    fp.entries.push_back(std::move(e));
  }
  std::sort(fp.entries.begin(), fp.entries.end(),
            [](const auto& x, const auto& y) { return x.cluster < y.cluster; });
  return fp;
}

}  // namespace

void assemble_labels(LabelScheme& scheme) {
  const Graph& g = scheme.g;
  int d = scheme.params.d;
  int scales = (int)scheme.bundles.size();

  std::vector<std::vector<VertexFingerprint>> vfp(scales);
  for (int si = 0; si < scales; ++si) {
    vfp[si].resize(g.n());
    for (int v = 0; v < g.n(); ++v) vfp[si][v] = fingerprint_of(scheme.bundles[si], v);
  }
  auto edge_fp = [&](int si, const Edge& e) {
    EdgeFingerprint fp;
    fp.edge_id = e.id;
    fp.u = e.u;
    fp.v = e.v;
    fp.length = e.length;
    fp.fu = vfp[si][e.u];
    fp.fv = vfp[si][e.v];
    return fp;
  };

  for (int v = 0; v < g.n(); ++v) {
    VLabel vl;
    vl.vertex = v;
    vl.scales.resize(scales);
    for (int si = 0; si < scales; ++si) {
      const ScaleBundle& b = scheme.bundles[si];
      ScaleVLabel& sv = vl.scales[si];
      sv.self = vfp[si][v];
      std::set<int> stored;
      for (const ClusterEntry& ce : b.clusters) {
        if (!std::binary_search(ce.vertices.begin(), ce.vertices.end(), v)) continue;
        for (int j = 0; j <= d; ++j) {
          if (b.hier.levels[j].sum_over(ce.vertices) > b.params.tau_heavy) continue;
          for (int w : ce.vertices)
            for (int ei : g.incident(w)) {
              int id = g.edge(ei).id;
              if (b.sampled[j].count(id)) stored.insert(id);
            }
        }
      }
      for (int id : stored) sv.stored_edges.push_back(edge_fp(si, *g.edge_by_id(id)));
    }
    scheme.vlabels[v] = std::move(vl);
  }

  // edge labels embed complete vertex labels, hence the second phase
  scheme.nontrivial_elabels = 0;
  for (const Edge& e : g.edges()) {
    ELabel el;
    el.edge_id = e.id;
    el.scales.resize(scales);
    std::set<int> endpoints;
    for (int si = 0; si < scales; ++si) {
      const ScaleBundle& b = scheme.bundles[si];
      ScaleELabel& se = el.scales[si];
      for (const ClusterEntry& ce : b.clusters) {
        if (!ce.tree.has_tree_edge(e.u, e.v)) continue;
        ELabelClusterBlock blk;
        blk.cluster = ce.id;
        blk.levels = ce.levels;
        blk.cluster_size = (int)ce.vertices.size();
        int child = ce.tree.parent.count(e.u) &&
                            ce.tree.parent.at(e.u).first == e.v
                        ? e.u
                        : e.v;
        int parent = (child == e.u) ? e.v : e.u;
        blk.fwd_pos = ce.tree.tour.pos.at({parent, child});
        blk.bwd_pos = ce.tree.tour.pos.at({child, parent});
        for (auto [pos, windows] :
             {std::pair<int, std::vector<ELabelWindow>*>{blk.fwd_pos, &blk.fwd},
              {blk.bwd_pos, &blk.bwd}}) {
          for (int j = 0; j <= d; ++j) {
            ELabelWindow w;
            w.j = j;
            w.pos = pos;
            w.pos_end = maximal_interval(ce.tree.tour, pos, b.hier.levels[j],
                                         b.params.tau_heavy);
            std::set<int> window_vertices;
            for (int t = w.pos; t < w.pos_end; ++t)
              window_vertices.insert(ce.tree.tour.at(t));
            std::set<int> ids;
            for (int wv : window_vertices)
              for (int ei : g.incident(wv)) {
                int id = g.edge(ei).id;
                if (b.sampled[j].count(id)) ids.insert(id);
              }
            for (int id : ids) {
              w.stored_edges.push_back(id);
              if (!se.edge_pool.count(id)) {
                const Edge* pe = g.edge_by_id(id);
                se.edge_pool.emplace(id, edge_fp(si, *pe));
                endpoints.insert(pe->u);
                endpoints.insert(pe->v);
              }
            }
            windows->push_back(std::move(w));
          }
        }
        se.clusters.push_back(std::move(blk));
      }
      if (!se.empty()) se.self = edge_fp(si, e);
    }
    for (int v : endpoints) el.endpoint_vlabels[v] = scheme.vlabels.at(v);
    if (!el.trivial()) ++scheme.nontrivial_elabels;
    scheme.elabels[e.id] = std::move(el);
  }

  scheme.cluster_size_bound = 0;
  for (const ScaleBundle& b : scheme.bundles)
    for (const NeighborhoodCover& nc : b.covers)
      for (const Clustering& cl : nc.clusterings)
        for (const auto& s : cl.clusters)
          scheme.cluster_size_bound += (long long)s.size();
}

LabelScheme build_labels(const Graph& g, const LabelParams& p) {
  LabelScheme scheme;
  scheme.g = g;
  scheme.params = p;
  scheme.i_max = scale_count(g) - 1;
  for (int i = 0; i <= scheme.i_max; ++i)
    scheme.bundles.push_back(build_scale_structures(g, i, p));
  assemble_labels(scheme);
  return scheme;
}

}  // namespace ftl
