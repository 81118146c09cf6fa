#include "ftl/decoder.hpp"

#include <algorithm>
#include <queue>

namespace ftl {

std::set<int> extract_waypoints(const VLabel& p, const VLabel& q,
                                const std::vector<const ELabel*>& failed) {
  std::set<int> w{p.vertex, q.vertex};
  for (const ELabel* el : failed)
    for (const auto& [v, vl] : el->endpoint_vlabels) w.insert(v);
  return w;
}

void ScaleSoup::ingest_vfp(const VertexFingerprint& fp) {
  if (fp.vertex < 0) return;
  vertices.insert(fp.vertex);
  for (const auto& e : fp.entries) {
    ClusterMeta& cm = clusters[e.cluster];
    if (cm.size == 0) {
      cm.size = e.cluster_size;
      cm.levels = e.levels;
      cm.a_cluster = e.a_cluster;
    } else if (cm.size != e.cluster_size) {
      throw CorruptLabelError("decoder: conflicting cluster size");
    }
    SubtreeRecord rec;
    rec.start = e.start;
    rec.end = e.end;
    rec.a_sub = e.a_subtree;
    cm.members[fp.vertex] = std::move(rec);
  }
}

void ScaleSoup::ingest_efp(const EdgeFingerprint& fp) {
  if (fp.edge_id < 0) return;
  edges[fp.edge_id] = {fp.u, fp.v, fp.length};
  ingest_vfp(fp.fu);
  ingest_vfp(fp.fv);
}

namespace {

// failure-side state with all rational comparisons already resolved
struct PreparedComp {
  std::vector<std::pair<int, int>> intervals;
  uint32_t heavy_mask = 0;  // bit j set iff A_j-heavy
};

struct PreparedCluster {
  int size = 0;
  int min_level = 0;
  std::vector<PreparedComp> comps;
  std::vector<std::tuple<int, int, int>> flat;  // (a, b, comp), sorted
  std::vector<std::pair<int, int>> members;     // (vertex, comp)
  std::vector<int> waypoint_members;

  int locate(int pos) const {
    int lo = 0, hi = (int)flat.size() - 1;
    while (lo <= hi) {
      int mid = (lo + hi) / 2;
      auto [a, b, c] = flat[mid];
      if (pos < a) hi = mid - 1;
      else if (pos > b) lo = mid + 1;
      else return c;
    }
    return -1;
  }
};

struct PreparedScale {
  std::map<ClusterId, PreparedCluster> clusters;
  std::vector<std::tuple<int, int, Len>> edges;  // non-failed (u, v, length)
  std::set<int> edge_ids;
  std::set<int> vertices;
};

}  // namespace

Decoder::Decoder(LabelParams params, std::vector<ScaleParams> scale_params)
    : params_(std::move(params)), scales_(std::move(scale_params)) {
  failure_soup_.resize(scales_.size());
}

void Decoder::set_failures(std::vector<const ELabel*> failed) {
  if ((int)failed.size() > params_.f)
    throw UsageError("decoder: more failures than the scheme's f bound");
  failed_ = std::move(failed);
  failed_ids_.clear();
  waypoints_from_failures_.clear();
  failure_soup_.assign(scales_.size(), ScaleSoup{});
  for (const ELabel* el : failed_) {
    failed_ids_.insert(el->edge_id);
    for (const auto& [v, vl] : el->endpoint_vlabels) {
      waypoints_from_failures_.insert(v);
      if (vl.scales.size() != scales_.size())
        throw CorruptLabelError("decoder: embedded label scale count mismatch");
      for (size_t si = 0; si < scales_.size(); ++si) {
        failure_soup_[si].ingest_vfp(vl.scales[si].self);
        for (const auto& efp : vl.scales[si].stored_edges)
          failure_soup_[si].ingest_efp(efp);
      }
    }
    if (el->trivial()) continue;
    if (el->scales.size() != scales_.size())
      throw CorruptLabelError("decoder: edge label scale count mismatch");
    for (size_t si = 0; si < scales_.size(); ++si) {
      const ScaleELabel& se = el->scales[si];
      if (se.empty()) continue;
      ScaleSoup& soup = failure_soup_[si];
      soup.ingest_efp(se.self);
      for (const auto& [id, fp] : se.edge_pool) soup.ingest_efp(fp);
      // one failed-child subtree record per cluster whose tree edge joins
      // these endpoints: the endpoint with the nested interval is the child
      for (const auto& blk : se.clusters) {
        const FingerprintClusterEntry* eu = se.self.fu.find(blk.cluster);
        const FingerprintClusterEntry* ev = se.self.fv.find(blk.cluster);
        if (!eu || !ev)
          throw CorruptLabelError("decoder: failed edge endpoint missing cluster entry");
        const FingerprintClusterEntry* child;
        if (eu->start >= ev->start && eu->end <= ev->end) child = eu;
        else if (ev->start >= eu->start && ev->end <= eu->end) child = ev;
        else throw CorruptLabelError("decoder: tree edge intervals not nested");
        SubtreeRecord rec;
        rec.start = child->start;
        rec.end = child->end;
        rec.a_sub = child->a_subtree;
        failure_soup_[si].clusters[blk.cluster].failed_children.push_back(
            std::move(rec));
      }
    }
  }

  // resolve the failure-side component structure and heaviness once
  auto prep = std::make_shared<std::vector<PreparedScale>>();
  std::vector<PreparedScale>& prepared = *prep;
  prepared.resize(scales_.size());
  for (size_t si = 0; si < scales_.size(); ++si) {
    const ScaleSoup& soup = failure_soup_[si];
    PreparedScale& ps = prepared[si];
    ps.vertices = soup.vertices;
    for (const auto& [id, uvl] : soup.edges) {
      if (failed_ids_.count(id)) continue;
      auto [u, v, len] = uvl;
      ps.edges.push_back({u, v, len});
      ps.edge_ids.insert(id);
    }
    for (const auto& [cid, cm] : soup.clusters) {
      PreparedCluster pc;
      pc.size = cm.size;
      pc.min_level = *std::min_element(cm.levels.begin(), cm.levels.end());
      auto comps = recover_components(cm.size, cm.a_cluster, cm.failed_children);
      for (const auto& comp : comps) {
        PreparedComp p;
        p.intervals = comp.intervals;
        for (int j = 0; j <= params_.d; ++j)
          if (comp.a_mass[j] > scales_[si].tau_heavy) p.heavy_mask |= (1u << j);
        pc.comps.push_back(std::move(p));
      }
      for (int c = 0; c < (int)pc.comps.size(); ++c)
        for (auto [a, b] : pc.comps[c].intervals) pc.flat.push_back({a, b, c});
      std::sort(pc.flat.begin(), pc.flat.end());
      for (const auto& [v, rec] : cm.members) {
        int c = pc.locate(rec.start);
        if (c < 0) throw CorruptLabelError("decoder: member outside all components");
        pc.members.push_back({v, c});
        if (waypoints_from_failures_.count(v)) pc.waypoint_members.push_back(v);
      }
      ps.clusters.emplace(cid, std::move(pc));
    }
  }
  prepared_ = prep;
}

namespace {

struct NodeRegistry {
  // kinds: 0 original vertex (scale-global), 1 component, 2 portal out,
  // 3 portal in, 4 waypoint level copy
  std::map<std::tuple<int, int, unsigned long long, long long>, int> index;
  std::vector<std::vector<std::pair<int, Len>>> adj;

  int node(int kind, int scale, unsigned long long a, long long b) {
    auto key = std::make_tuple(kind, kind == 0 ? -1 : scale, a, b);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = (int)adj.size();
    index.emplace(key, id);
    adj.emplace_back();
    return id;
  }
  void arc(int a, int b, Len w) { adj[a].push_back({b, w}); }
  void undirected(int a, int b, Len w) {
    arc(a, b, w);
    arc(b, a, w);
  }
  Len dist(int s, int t) const {
    std::vector<Len> d(adj.size(), kInfLen);
    using Item = std::pair<Len, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    d[s] = 0;
    pq.push({0, s});
    while (!pq.empty()) {
      auto [dv, v] = pq.top();
      pq.pop();
      if (dv != d[v]) continue;
      if (v == t) return dv;
      for (auto [w, len] : adj[v])
        if (dv + len < d[w]) {
          d[w] = dv + len;
          pq.push({dv + len, w});
        }
    }
    return d[t];
  }
};

// per-query additions on top of the prepared failure side
struct ScaleExtras {
  struct NewCluster {
    int size = 0;
    int min_level = 0;
    uint32_t heavy_mask = 0;  // single component
    std::vector<int> members;
  };
  std::map<ClusterId, NewCluster> new_clusters;
  std::map<ClusterId, std::vector<std::pair<int, int>>> extra_members;
  std::vector<std::tuple<int, int, Len>> extra_edges;
  std::set<int> extra_vertices;
  std::set<std::pair<unsigned long long, int>> seen_members;
};

}  // namespace

Len Decoder::distance(const VLabel& p, const VLabel& q, bool packed) const {
  if (p.vertex == q.vertex) return 0;
  if (p.scales.size() != scales_.size() || q.scales.size() != scales_.size())
    throw CorruptLabelError("decoder: vertex label scale count mismatch");
  if (!packed) return unpacked_distance_slow(p, q);

  const auto& prepared =
      *static_cast<const std::vector<PreparedScale>*>(prepared_.get());
  NodeRegistry reg;
  int src = reg.node(0, 0, (unsigned long long)p.vertex, 0);
  int dst = reg.node(0, 0, (unsigned long long)q.vertex, 0);

  for (size_t si = 0; si < scales_.size(); ++si) {
    const ScaleParams& sp = scales_[si];
    const PreparedScale& ps = prepared[si];
    ScaleExtras ex;

    auto ingest_entry = [&](int vertex, const FingerprintClusterEntry& e) {
      if (!ex.seen_members.insert({e.cluster, vertex}).second) return;
      auto known = ps.clusters.find(e.cluster);
      if (known != ps.clusters.end()) {
        // already-recovered cluster: locate the member by its tour position
        bool have = false;
        for (const auto& [v, c] : known->second.members)
          if (v == vertex) { have = true; break; }
        if (!have) {
          int c = known->second.locate(e.start);
          if (c < 0)
            throw CorruptLabelError("decoder: member outside all components");
          ex.extra_members[e.cluster].push_back({vertex, c});
        }
        return;
      }
      auto nc = ex.new_clusters.find(e.cluster);
      if (nc == ex.new_clusters.end()) {
        ScaleExtras::NewCluster c;
        c.size = e.cluster_size;
        c.min_level = *std::min_element(e.levels.begin(), e.levels.end());
        for (int j = 0; j <= params_.d; ++j)
          if (e.a_cluster[j] > sp.tau_heavy) c.heavy_mask |= (1u << j);
        nc = ex.new_clusters.emplace(e.cluster, std::move(c)).first;
      }
      nc->second.members.push_back(vertex);
    };
    auto ingest_vfp = [&](const VertexFingerprint& fp) {
      if (fp.vertex < 0) return;
      ex.extra_vertices.insert(fp.vertex);
      for (const auto& e : fp.entries) ingest_entry(fp.vertex, e);
    };
    std::set<int> extra_edge_ids;
    auto ingest_efp = [&](const EdgeFingerprint& fp) {
      if (fp.edge_id < 0) return;
      if (!failed_ids_.count(fp.edge_id) && !ps.edge_ids.count(fp.edge_id) &&
          extra_edge_ids.insert(fp.edge_id).second)
        ex.extra_edges.push_back({fp.u, fp.v, fp.length});
      ingest_vfp(fp.fu);
      ingest_vfp(fp.fv);
    };
    for (const VLabel* vl : {&p, &q}) {
      ingest_vfp(vl->scales[si].self);
      for (const auto& efp : vl->scales[si].stored_edges) ingest_efp(efp);
    }

    // type 1 edges
    for (auto [u, v, len] : ps.edges)
      reg.undirected(reg.node(0, 0, (unsigned long long)u, 0),
                     reg.node(0, 0, (unsigned long long)v, 0), len);
    for (auto [u, v, len] : ex.extra_edges)
      reg.undirected(reg.node(0, 0, (unsigned long long)u, 0),
                     reg.node(0, 0, (unsigned long long)v, 0), len);

    Len portal_len = sp.h * params_.s_nc * ((Len)params_.s_ed + 1);

    auto comp_node = [&](ClusterId cid, int c) {
      return reg.node(1, (int)si, cid, c);
    };

    // type 2 edges and portal wiring per cluster
    auto is_pq = [&](int v) { return v == p.vertex || v == q.vertex; };
    for (const auto& [cid, pc] : ps.clusters) {
      std::vector<int> wps = pc.waypoint_members;
      for (const auto& [v, c] : pc.members) {
        reg.undirected(reg.node(0, 0, (unsigned long long)v, 0), comp_node(cid, c),
                       sp.h_diam);
        if (is_pq(v)) wps.push_back(v);
      }
      auto em = ex.extra_members.find(cid);
      if (em != ex.extra_members.end())
        for (const auto& [v, c] : em->second) {
          reg.undirected(reg.node(0, 0, (unsigned long long)v, 0), comp_node(cid, c),
                         sp.h_diam);
          if (is_pq(v)) wps.push_back(v);
        }
      std::sort(wps.begin(), wps.end());
      wps.erase(std::unique(wps.begin(), wps.end()), wps.end());
      if (wps.empty()) continue;
      for (int j = pc.min_level; j <= params_.d; ++j) {
        int pout = reg.node(2, (int)si, cid, j);
        int pin = reg.node(3, (int)si, cid, j);
        for (int v : wps) {
          int wp = reg.node(4, (int)si, (unsigned long long)v, j);
          reg.arc(pout, wp, portal_len);
          reg.arc(wp, pin, portal_len);
        }
        for (int c = 0; c < (int)pc.comps.size(); ++c)
          if (pc.comps[c].heavy_mask & (1u << j)) {
            reg.arc(comp_node(cid, c), pout, portal_len);
            reg.arc(pin, comp_node(cid, c), portal_len);
          }
      }
    }
    for (const auto& [cid, nc] : ex.new_clusters) {
      std::vector<int> wps;
      for (int v : nc.members) {
        reg.undirected(reg.node(0, 0, (unsigned long long)v, 0), comp_node(cid, 0),
                       sp.h_diam);
        if (is_pq(v)) wps.push_back(v);
      }
      std::sort(wps.begin(), wps.end());
      wps.erase(std::unique(wps.begin(), wps.end()), wps.end());
      if (wps.empty()) continue;
      for (int j = nc.min_level; j <= params_.d; ++j) {
        int pout = reg.node(2, (int)si, cid, j);
        int pin = reg.node(3, (int)si, cid, j);
        for (int v : wps) {
          int wp = reg.node(4, (int)si, (unsigned long long)v, j);
          reg.arc(pout, wp, portal_len);
          reg.arc(wp, pin, portal_len);
        }
        if (nc.heavy_mask & (1u << j)) {
          reg.arc(comp_node(cid, 0), pout, portal_len);
          reg.arc(pin, comp_node(cid, 0), portal_len);
        }
      }
    }
  }
  return reg.dist(src, dst);
}

Len Decoder::unpacked_distance_slow(const VLabel& p, const VLabel& q) const {
  // reference implementation materializing the explicit discovered graph
  std::set<int> waypoints = waypoints_from_failures_;
  waypoints.insert(p.vertex);
  waypoints.insert(q.vertex);

  NodeRegistry reg;
  int src = reg.node(0, 0, (unsigned long long)p.vertex, 0);
  int dst = reg.node(0, 0, (unsigned long long)q.vertex, 0);

  for (size_t si = 0; si < scales_.size(); ++si) {
    const ScaleParams& sp = scales_[si];
    ScaleSoup soup = failure_soup_[si];
    for (const VLabel* vl : {&p, &q}) {
      soup.ingest_vfp(vl->scales[si].self);
      for (const auto& efp : vl->scales[si].stored_edges) soup.ingest_efp(efp);
    }
    for (const auto& [id, uvl] : soup.edges) {
      if (failed_ids_.count(id)) continue;
      auto [u, v, len] = uvl;
      reg.undirected(reg.node(0, 0, (unsigned long long)u, 0),
                     reg.node(0, 0, (unsigned long long)v, 0), len);
    }
    std::map<ClusterId, std::vector<RecoveredComponent>> recovered;
    for (auto& [cid, cm] : soup.clusters) {
      auto comps = recover_components(cm.size, cm.a_cluster, cm.failed_children);
      for (const auto& [v, rec] : cm.members) {
        int ci = locate_component(comps, rec.start);
        if (ci < 0) throw CorruptLabelError("decoder: member outside all components");
        reg.undirected(reg.node(0, 0, (unsigned long long)v, 0),
                       reg.node(1, (int)si, cid, ci), sp.h_diam);
      }
      recovered.emplace(cid, std::move(comps));
    }
    auto cluster_waypoints = [&](ClusterId cid) {
      std::set<int> w;
      for (const auto& [v, rec] : soup.clusters.at(cid).members)
        if (waypoints.count(v)) w.insert(v);
      return w;
    };
    std::vector<std::pair<ClusterId, int>> all_comps;
    for (const auto& [cid, comps] : recovered)
      for (int ci = 0; ci < (int)comps.size(); ++ci) all_comps.push_back({cid, ci});
    for (size_t x = 0; x < all_comps.size(); ++x)
      for (size_t y = x + 1; y < all_comps.size(); ++y) {
        auto [cx, ix] = all_comps[x];
        auto [cy, iy] = all_comps[y];
        std::set<int> wx = cluster_waypoints(cx);
        bool shared = false;
        for (int v : cluster_waypoints(cy))
          if (wx.count(v)) { shared = true; break; }
        if (!shared) continue;
        const auto& mx = soup.clusters.at(cx);
        const auto& my = soup.clusters.at(cy);
        int jx = *std::min_element(mx.levels.begin(), mx.levels.end());
        int jy = *std::min_element(my.levels.begin(), my.levels.end());
        int jj = std::max(jx, jy);
        if (recovered.at(cx)[ix].a_mass[jj] > sp.tau_heavy &&
            recovered.at(cy)[iy].a_mass[jj] > sp.tau_heavy)
          reg.undirected(reg.node(1, (int)si, cx, ix), reg.node(1, (int)si, cy, iy),
                         sp.h_ed * (Len)params_.s_ed + 2 * sp.h_diam);
      }
  }
  return reg.dist(src, dst);
}

QueryResult Decoder::query(const VLabel& p, const VLabel& q) const {
  QueryResult r;
  r.stretch = params_.stretch();
  Len d = distance(p, q, true);
  if (d >= kInfLen) {
    r.unreachable = true;
  } else {
    r.unreachable = false;
    r.estimate = d;
  }
  return r;
}

Len Decoder::packed_distance(const VLabel& p, const VLabel& q) const {
  return distance(p, q, true);
}

Len Decoder::unpacked_distance(const VLabel& p, const VLabel& q) const {
  if (p.vertex == q.vertex) return 0;
  return unpacked_distance_slow(p, q);
}

QueryResult decode_query(const LabelStore& store, int p, int q,
                         const std::vector<int>& failed_edge_ids) {
  Decoder dec(store);
  std::vector<const ELabel*> failed;
  for (int id : failed_edge_ids) {
    auto it = store.elabels.find(id);
    if (it == store.elabels.end())
      throw UsageError("decode_query: unknown edge id " + std::to_string(id));
    failed.push_back(&it->second);
  }
  dec.set_failures(std::move(failed));
  auto pv = store.vlabels.find(p);
  auto qv = store.vlabels.find(q);
  if (pv == store.vlabels.end() || qv == store.vlabels.end())
    throw UsageError("decode_query: unknown vertex");
  return dec.query(pv->second, qv->second);
}

}  // namespace ftl
