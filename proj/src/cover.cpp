#include "ftl/cover.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

namespace ftl {

std::vector<const std::vector<int>*> NeighborhoodCover::all_clusters() const {
  std::vector<const std::vector<int>*> out;
  for (const Clustering& cl : clusterings)
    for (const auto& s : cl.clusters) out.push_back(&s);
  return out;
}

namespace {

// distances from src inside the induced subgraph G[avail]
std::vector<Len> induced_dist(const Graph& g, int src, const std::vector<char>& avail) {
  return sssp_induced(g, src, avail).dist;
}

}  // namespace

NeighborhoodCover build_cover(const Graph& g, Len h_cov, int s_nc, double c_omega) {
  if (s_nc < 2) throw ConstructionError("build_cover: s_nc must be >= 2");
  if (h_cov < 0) throw ConstructionError("build_cover: negative h_cov");
  int n = g.n();
  NeighborhoodCover nc;
  nc.h_cov = h_cov;
  nc.h_diam = (Len)s_nc * h_cov;
  if (n == 0) return nc;

  long long width_cap =
      (long long)std::floor(c_omega * s_nc * std::pow((double)n, 1.0 / s_nc) + 1e-9);
  width_cap = std::max(width_cap, 1LL);
  double growth = std::pow((double)n, 1.0 / s_nc);
  Len r_max = nc.h_diam / 2;  // diameter of a radius-r ball is <= 2r

  // full-graph balls, for coverage tests
  std::vector<std::vector<Len>> dist_full(n);
  for (int v = 0; v < n; ++v) dist_full[v] = sssp(g, v).dist;
  auto ball_inside = [&](int v, const std::vector<char>& set) {
    for (int u = 0; u < n; ++u)
      if (dist_full[v][u] <= h_cov && !set[u]) return false;
    return true;
  };

  std::vector<char> uncovered(n, 1);
  int uncovered_count = n;
  while (uncovered_count > 0) {
    if ((long long)nc.clusterings.size() >= width_cap)
      throw ConstructionError("build_cover: width cap exceeded");
    Clustering cl;
    std::vector<char> avail(n, 1);
    for (;;) {
      // candidate seeds: uncovered vertices whose full ball is still available
      int best_seed = -1;
      int best_gain = 0;
      std::vector<int> best_cluster;
      for (int v = 0; v < n; ++v) {
        if (!uncovered[v] || !avail[v]) continue;
        if (!ball_inside(v, avail)) continue;
        std::vector<Len> d = induced_dist(g, v, avail);
        // grow the ball while it expands quickly, keeping diameter <= h_diam
        Len r = h_cov;
        while (r + h_cov <= r_max) {
          int inner = 0, outer = 0;
          for (int u = 0; u < n; ++u) {
            if (d[u] <= r) ++inner;
            if (d[u] <= r + h_cov) ++outer;
          }
          if ((double)outer > growth * inner) r += h_cov;
          else break;
        }
        std::vector<int> cluster;
        std::vector<char> cluster_mask(n, 0);
        for (int u = 0; u < n; ++u)
          if (d[u] <= r) {
            cluster.push_back(u);
            cluster_mask[u] = 1;
          }
        int gain = 0;
        for (int u = 0; u < n; ++u)
          if (uncovered[u] && ball_inside(u, cluster_mask)) ++gain;
        if (gain > best_gain) {
          best_gain = gain;
          best_seed = v;
          best_cluster = std::move(cluster);
        }
      }
      if (best_seed < 0) break;
      std::vector<char> cluster_mask(n, 0);
      for (int u : best_cluster) cluster_mask[u] = 1;
      for (int u = 0; u < n; ++u) {
        if (cluster_mask[u]) avail[u] = 0;
        if (uncovered[u] && ball_inside(u, cluster_mask)) {
          uncovered[u] = 0;
          --uncovered_count;
        }
      }
      cl.clusters.push_back(std::move(best_cluster));
    }
    if (cl.clusters.empty())
      throw ConstructionError("build_cover: no progress (internal)");
    nc.clusterings.push_back(std::move(cl));
  }
  return nc;
}

bool check_cover(const Graph& g, const NeighborhoodCover& nc, std::string* why) {
  int n = g.n();
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::vector<std::vector<Len>> dist_full(n);
  for (int v = 0; v < n; ++v) dist_full[v] = sssp(g, v).dist;
  for (const Clustering& cl : nc.clusterings) {
    std::vector<char> used(n, 0);
    for (const auto& s : cl.clusters) {
      std::vector<char> mask(n, 0);
      for (int v : s) {
        if (used[v]) return fail("clusters overlap within a clustering");
        used[v] = mask[v] = 1;
      }
      for (int v : s) {
        std::vector<Len> d = induced_dist(g, v, mask);
        for (int u : s)
          if (d[u] > nc.h_diam) return fail("cluster diameter exceeds h_diam");
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    bool covered = false;
    for (const Clustering& cl : nc.clusterings) {
      for (const auto& s : cl.clusters) {
        std::vector<char> mask(n, 0);
        for (int u : s) mask[u] = 1;
        bool inside = true;
        for (int u = 0; u < n; ++u)
          if (dist_full[v][u] <= nc.h_cov && !mask[u]) { inside = false; break; }
        if (inside) { covered = true; break; }
      }
      if (covered) break;
    }
    if (!covered) return fail("ball of vertex " + std::to_string(v) + " uncovered");
  }
  return true;
}

bool ClusterTree::has_tree_edge(int u, int v) const {
  auto it = parent.find(u);
  if (it != parent.end() && it->second.first == v) return true;
  it = parent.find(v);
  return it != parent.end() && it->second.first == u;
}

ClusterTree build_cluster_tree(const Graph& g_j, const std::vector<int>& cluster) {
  ClusterTree t;
  t.vertices = cluster;
  std::sort(t.vertices.begin(), t.vertices.end());
  if (t.vertices.empty()) throw ConstructionError("cluster tree: empty cluster");
  t.root = t.vertices.front();
  std::vector<char> mask(g_j.n(), 0);
  for (int v : t.vertices) mask[v] = 1;
  SsspResult sp = sssp_induced(g_j, t.root, mask);
  std::map<int, std::vector<int>> children;
  for (int v : t.vertices) {
    if (v == t.root) continue;
    if (sp.dist[v] == kInfLen)
      throw ConstructionError("cluster tree: cluster disconnected in induced subgraph");
    const Edge& e = g_j.edge(sp.parent_edge[v]);
    t.parent[v] = {e.other(v), e.id};
    children[e.other(v)].push_back(v);
  }
  for (auto& [p, ch] : children) std::sort(ch.begin(), ch.end());

  // Euler tour, children in ascending id order
  std::vector<int>& seq = t.tour.seq;
  std::function<void(int)> dfs = [&](int v) {
    auto it = children.find(v);
    if (it != children.end()) {
      for (int c : it->second) {
        seq.push_back(v);
        dfs(c);
      }
    }
    seq.push_back(v);
  };
  dfs(t.root);
  for (int i = 1; i < (int)seq.size(); ++i)
    t.tour.pos[{seq[i - 1], seq[i]}] = i;
  for (int i = 0; i < (int)seq.size(); ++i) {
    if (!t.tour.start.count(seq[i])) t.tour.start[seq[i]] = i;
    t.tour.end[seq[i]] = i;
  }
  return t;
}

int maximal_interval(const EulerTour& tour, int t, const NodeWeighting& a, const Rat& tau) {
  int period = tour.period();
  if (period <= 0) throw Error("maximal_interval: singleton tour has no positions");
  if (t < 1 || t > period) throw Error("maximal_interval: bad position");
  int limit = t + period;  // t + 2(|S|-1)
  std::set<int> seen;
  Rat sum = 0;
  int tp = t;
  while (tp < limit) {
    int v = tour.at(tp);
    if (!seen.count(v)) {
      Rat nsum = sum + a.value(v);
      if (nsum > tau) break;
      sum = nsum;
      seen.insert(v);
    }
    ++tp;
  }
  return tp;
}

std::vector<RecoveredComponent> recover_components(
    int cluster_size, const std::vector<Rat>& a_root,
    std::vector<SubtreeRecord> failed_children) {
  int tour_end = 2 * cluster_size - 2;
  struct Rec {
    int start, end;
    std::vector<Rat> a_sub;
  };
  std::vector<Rec> recs;
  recs.push_back({0, tour_end, a_root});
  // dedupe identical child records (parallel failed edges)
  std::sort(failed_children.begin(), failed_children.end(),
            [](const SubtreeRecord& x, const SubtreeRecord& y) {
              return std::tie(x.start, x.end) < std::tie(y.start, y.end);
            });
  for (size_t i = 0; i < failed_children.size(); ++i) {
    if (i > 0 && failed_children[i].start == failed_children[i - 1].start &&
        failed_children[i].end == failed_children[i - 1].end)
      continue;
    const SubtreeRecord& r = failed_children[i];
    if (r.start < 0 || r.end > tour_end || r.start > r.end)
      throw CorruptLabelError("recover_components: interval out of range");
    recs.push_back({r.start, r.end, r.a_sub});
  }
  // laminarity
  for (size_t i = 0; i < recs.size(); ++i)
    for (size_t j = i + 1; j < recs.size(); ++j) {
      const Rec &x = recs[i], &y = recs[j];
      bool disjoint = x.end < y.start || y.end < x.start;
      bool nested = (x.start <= y.start && y.end <= x.end) ||
                    (y.start <= x.start && x.end <= y.end);
      if (!disjoint && !nested)
        throw CorruptLabelError("recover_components: intervals not laminar");
      if (i != j && x.start == y.start && x.end == y.end)
        throw CorruptLabelError("recover_components: duplicate record");
    }
  size_t levels = a_root.size();
  for (const Rec& r : recs)
    if (r.a_sub.size() != levels)
      throw CorruptLabelError("recover_components: level count mismatch");

  // each record minus its direct children
  std::vector<RecoveredComponent> out(recs.size());
  for (size_t i = 0; i < recs.size(); ++i) {
    const Rec& r = recs[i];
    // direct children: maximal records strictly inside r
    std::vector<const Rec*> kids;
    for (size_t j = 0; j < recs.size(); ++j) {
      if (i == j) continue;
      const Rec& c = recs[j];
      if (!(r.start <= c.start && c.end <= r.end)) continue;
      if (c.start == r.start && c.end == r.end) continue;
      bool direct = true;
      for (size_t l = 0; l < recs.size(); ++l) {
        if (l == i || l == j) continue;
        const Rec& mid = recs[l];
        if (r.start <= mid.start && mid.end <= r.end &&
            !(mid.start == r.start && mid.end == r.end) &&
            mid.start <= c.start && c.end <= mid.end &&
            !(mid.start == c.start && mid.end == c.end)) {
          direct = false;
          break;
        }
      }
      if (direct) kids.push_back(&c);
    }
    std::sort(kids.begin(), kids.end(),
              [](const Rec* x, const Rec* y) { return x->start < y->start; });
    RecoveredComponent& comp = out[i];
    comp.a_mass = r.a_sub;
    int cur = r.start;
    for (const Rec* c : kids) {
      if (c->start > cur) comp.intervals.push_back({cur, c->start - 1});
      cur = c->end + 1;
      for (size_t l = 0; l < levels; ++l) {
        comp.a_mass[l] -= c->a_sub[l];
        if (comp.a_mass[l] < 0)
          throw CorruptLabelError("recover_components: negative component mass");
      }
    }
    if (cur <= r.end) comp.intervals.push_back({cur, r.end});
    if (comp.intervals.empty())
      throw CorruptLabelError("recover_components: empty component");
  }
  return out;
}

int locate_component(const std::vector<RecoveredComponent>& comps, int pos) {
  for (int i = 0; i < (int)comps.size(); ++i)
    for (const auto& [a, b] : comps[i].intervals)
      if (a <= pos && pos <= b) return i;
  return -1;
}

}  // namespace ftl
