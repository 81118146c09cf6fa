#include "ftl/tz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace ftl {

namespace {

TzClusterTree build_tz_tree(const Graph& g, int w, const std::set<int>& cluster) {
  // shortest-path tree rooted at w over the cluster; membership is
  // shortest-path closed, so parents stay inside
  TzClusterTree t;
  t.root = w;
  SsspResult sp = sssp(g, w);
  std::map<int, std::vector<int>> children;
  for (int v : cluster) {
    if (v == w) continue;
    if (sp.dist[v] == kInfLen)
      throw ConstructionError("tz: cluster member unreachable from landmark");
    const Edge& e = g.edge(sp.parent_edge[v]);
    t.parent[v] = {e.other(v), e.id};
    children[e.other(v)].push_back(v);
  }
  for (auto& [p, ch] : children) std::sort(ch.begin(), ch.end());
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
  dfs(w);
  for (int i = 1; i < (int)seq.size(); ++i) t.tour.pos[{seq[i - 1], seq[i]}] = i;
  for (int i = 0; i < (int)seq.size(); ++i) {
    if (!t.tour.start.count(seq[i])) t.tour.start[seq[i]] = i;
    t.tour.end[seq[i]] = i;
  }
  return t;
}

}  // namespace

TZStructure tz_build(const Graph& g, int k, double c_b) {
  if (k < 1) throw UsageError("tz_build: k must be >= 1");
  int n = g.n();
  TZStructure tz;
  tz.k = k;
  std::vector<std::vector<Len>> dist(n);
  for (int v = 0; v < n; ++v) dist[v] = sssp(g, v).dist;

  // near-ball size: bunches per level stay below q
  long long q = (long long)std::ceil(std::pow(std::max(n, 1), 1.0 / k) *
                                     std::max(1.0, std::log((double)std::max(n, 2))));
  q = std::max(q, 1LL);

  tz.sets.assign(k + 1, {});
  for (int v = 0; v < n; ++v) tz.sets[0].push_back(v);
  for (int i = 1; i < k; ++i) {
    const std::vector<int>& prev = tz.sets[i - 1];
    // near-balls: the q nearest reachable previous-level landmarks
    std::vector<std::vector<int>> balls;
    for (int u = 0; u < n; ++u) {
      std::vector<std::pair<Len, int>> cand;
      for (int w : prev)
        if (dist[u][w] != kInfLen) cand.push_back({dist[u][w], w});
      if ((long long)cand.size() < q) continue;  // all of them may join the bunch
      std::sort(cand.begin(), cand.end());
      std::vector<int> ball;
      for (long long t = 0; t < q; ++t) ball.push_back(cand[t].second);
      balls.push_back(std::move(ball));
    }
    std::set<int> chosen;
    std::vector<char> hit(balls.size(), 0);
    size_t remaining = balls.size();
    while (remaining > 0) {
      std::map<int, int> gain;
      for (size_t b = 0; b < balls.size(); ++b) {
        if (hit[b]) continue;
        for (int w : balls[b]) ++gain[w];
      }
      int best = -1, best_gain = 0;
      for (auto [w, gn] : gain)
        if (gn > best_gain) {
          best = w;
          best_gain = gn;
        }
      if (best < 0) break;
      chosen.insert(best);
      for (size_t b = 0; b < balls.size(); ++b)
        if (!hit[b] &&
            std::find(balls[b].begin(), balls[b].end(), best) != balls[b].end()) {
          hit[b] = 1;
          --remaining;
        }
    }
    tz.sets[i].assign(chosen.begin(), chosen.end());
  }
  // A_k = empty set

  // bunches and pivots
  auto dist_to_set = [&](int u, const std::vector<int>& s) {
    Len best = kInfLen;
    for (int w : s) best = std::min(best, dist[u][w]);
    return best;
  };
  std::map<int, std::set<int>> cluster_of;  // landmark -> members
  for (int u = 0; u < n; ++u) {
    TzVertexLabel label;
    label.vertex = u;
    for (int i = 0; i < k; ++i) {
      Len next = dist_to_set(u, tz.sets[i + 1]);
      for (int w : tz.sets[i]) {
        if (dist[u][w] < next) {
          label.bunch[w] = {dist[u][w], 0, 0};
          cluster_of[w].insert(u);
        }
      }
    }
    tz.labels[u] = std::move(label);
  }
  // pivots: nearest bunch member inside A_i (ties to the lower id)
  for (int u = 0; u < n; ++u) {
    TzVertexLabel& label = tz.labels[u];
    label.pivots.assign(k, -1);
    for (int i = 0; i < k; ++i) {
      Len best = kInfLen;
      int arg = -1;
      for (int w : tz.sets[i]) {
        if (!label.bunch.count(w)) continue;
        Len dw = std::get<0>(label.bunch[w]);
        if (dw < best || (dw == best && w < arg)) {
          best = dw;
          arg = w;
        }
      }
      label.pivots[i] = arg;
    }
  }
  // cluster-trees and tour ranges
  for (auto& [w, members] : cluster_of) {
    tz.cluster_trees[w] = build_tz_tree(g, w, members);
    const TzClusterTree& t = tz.cluster_trees[w];
    for (int u : members) {
      auto& entry = tz.labels[u].bunch[w];
      std::get<1>(entry) = t.tour.start.at(u);
      std::get<2>(entry) = t.tour.end.at(u);
    }
  }
  // bunch size cap
  double cap = c_b * k * std::pow((double)std::max(n, 1), 1.0 / k) *
               std::max(1.0, std::log((double)std::max(n, 2)));
  for (const auto& [u, label] : tz.labels)
    if ((double)label.bunch.size() > cap)
      throw ConstructionError("tz_build: bunch size cap exceeded");
  return tz;
}

TzEstimate tz_query(const TzVertexLabel& p, const TzVertexLabel& q) {
  TzEstimate r;
  if (p.vertex == q.vertex) {
    r.reachable = true;
    r.estimate = 0;
    r.landmark = p.vertex;
    return r;
  }
  int k = (int)p.pivots.size();
  for (int i = 0; i < k; ++i) {
    // prefer p's pivot on ties
    if (p.pivots[i] >= 0 && q.bunch.count(p.pivots[i])) {
      int w = p.pivots[i];
      r.reachable = true;
      r.landmark = w;
      r.estimate = std::get<0>(p.bunch.at(w)) + std::get<0>(q.bunch.at(w));
      return r;
    }
    if (q.pivots[i] >= 0 && p.bunch.count(q.pivots[i])) {
      int w = q.pivots[i];
      r.reachable = true;
      r.landmark = w;
      r.estimate = std::get<0>(p.bunch.at(w)) + std::get<0>(q.bunch.at(w));
      return r;
    }
  }
  return r;
}

std::pair<int, int> LaminarStructure::query_linear(int x) const {
  int shortest = -1, longest = -1;
  long long slen = 0, llen = 0;
  for (const auto& iv : intervals) {
    if (!(iv.start <= x && x <= iv.end)) continue;
    long long len = iv.end - iv.start;
    if (shortest < 0 || len < slen) {
      shortest = iv.owner;
      slen = len;
    }
    if (longest < 0 || len > llen) {
      longest = iv.owner;
      llen = len;
    }
  }
  return {shortest, longest};
}

std::pair<int, int> LaminarStructure::query(int x) const {
  // answers change only at interval boundaries and their +-1 neighbours, all
  // of which are precomputed; take the largest precomputed point <= x
  auto it = std::upper_bound(points.begin(), points.end(), x);
  if (it == points.begin()) return {-1, -1};
  size_t idx = (size_t)(it - points.begin()) - 1;
  return answers[idx];
}

LaminarStructure build_laminar(std::vector<LaminarInterval> intervals) {
  LaminarStructure ls;
  ls.intervals = std::move(intervals);
  std::set<int> pts;
  for (const auto& iv : ls.intervals) {
    for (int p : {iv.start - 1, iv.start, iv.end, iv.end + 1}) {
      pts.insert(p);
      pts.insert(p + 1);
    }
  }
  ls.points.assign(pts.begin(), pts.end());
  for (int p : ls.points) ls.answers.push_back(ls.query_linear(p));
  return ls;
}

CompiledOracle compile_oracle(const LabelStore& ft, const TZStructure& tz,
                              const std::vector<int>& failed_ids) {
  CompiledOracle co;
  co.failed_ids = failed_ids;
  std::sort(co.failed_ids.begin(), co.failed_ids.end());
  co.failed_ids.erase(std::unique(co.failed_ids.begin(), co.failed_ids.end()),
                      co.failed_ids.end());
  if ((int)co.failed_ids.size() > ft.params.f)
    throw UsageError("compile: more failures than the scheme's f bound");

  std::set<int> s_set;
  std::vector<const ELabel*> failed;
  for (int id : co.failed_ids) {
    const EdgeMeta* em = ft.edge_by_id(id);
    if (!em) throw UsageError("compile: unknown edge id " + std::to_string(id));
    s_set.insert(em->u);
    s_set.insert(em->v);
    failed.push_back(&ft.elabels.at(id));
  }
  co.s_vertices.assign(s_set.begin(), s_set.end());

  Decoder dec(ft);
  dec.set_failures(failed);
  for (size_t x = 0; x < co.s_vertices.size(); ++x)
    for (size_t y = x + 1; y < co.s_vertices.size(); ++y) {
      int a = co.s_vertices[x], b = co.s_vertices[y];
      co.table[{a, b}] = dec.query(ft.vlabels.at(a), ft.vlabels.at(b));
    }

  // landmarks whose cluster-tree contains a failed endpoint
  std::map<int, std::vector<LaminarInterval>> by_landmark;
  for (int s : co.s_vertices) {
    const TzVertexLabel& lbl = tz.labels.at(s);
    for (const auto& [w, entry] : lbl.bunch) {
      LaminarInterval iv;
      iv.owner = s;
      iv.start = std::get<1>(entry);
      iv.end = std::get<2>(entry);
      by_landmark[w].push_back(iv);
    }
  }
  for (auto& [w, ivs] : by_landmark)
    co.per_landmark.emplace(w, build_laminar(std::move(ivs)));
  return co;
}

FastQueryResult fast_query(const CompiledOracle& co, const TzVertexLabel& p,
                           const TzVertexLabel& q) {
  FastQueryResult r;
  if (p.vertex == q.vertex) {
    r.unreachable = false;
    r.estimate = 0;
    return r;
  }
  TzEstimate base = tz_query(p, q);
  if (!base.reachable) return r;  // disconnected even without failures
  int w = base.landmark;

  auto it = co.per_landmark.find(w);
  if (it == co.per_landmark.end()) {
    r.unreachable = false;
    r.estimate = base.estimate;
    return r;
  }
  const LaminarStructure& ls = it->second;
  int xp = std::get<1>(p.bunch.at(w));
  int xq = std::get<1>(q.bunch.at(w));
  auto [p_deep, p_high] = ls.query(xp);  // (first, last) on the p-to-w path
  auto [q_deep, q_high] = ls.query(xq);
  if (p_deep < 0 && q_deep < 0) {
    r.unreachable = false;
    r.estimate = base.estimate;
    return r;
  }
  int s_p = p_deep >= 0 ? p_deep : q_high;
  int s_q = q_deep >= 0 ? q_deep : p_high;
  if (s_p == s_q) {
    // single failed endpoint on the path; its removal does not disconnect the
    // tree path walk, but the table has no self entry: distance 0 add-on
    r.unreachable = false;
    r.estimate = base.estimate;
    return r;
  }
  auto key = std::minmax(s_p, s_q);
  const QueryResult& qr = co.table.at({key.first, key.second});
  if (qr.unreachable) return r;  // s_p cut off from s_q
  r.unreachable = false;
  r.estimate = base.estimate + qr.estimate;
  return r;
}

namespace {

void put_query_result(ByteWriter& w, const QueryResult& qr) {
  w.boolean(qr.unreachable);
  w.i64(qr.estimate);
  w.i64(qr.stretch);
}

QueryResult get_query_result(ByteReader& r) {
  QueryResult qr;
  qr.unreachable = r.boolean();
  qr.estimate = r.i64();
  qr.stretch = r.i64();
  return qr;
}

constexpr uint32_t kCompiledMagic = 0x46544C43;  // "FTLC"
constexpr uint32_t kTzMagic = 0x46544C54;        // "FTLT"

}  // namespace

std::vector<uint8_t> serialize_compiled(const CompiledOracle& co) {
  ByteWriter w;
  w.u64(kCompiledMagic);
  w.u64(1);
  w.u64(co.failed_ids.size());
  for (int id : co.failed_ids) w.i64(id);
  w.u64(co.s_vertices.size());
  for (int v : co.s_vertices) w.i64(v);
  w.u64(co.table.size());
  for (const auto& [key, qr] : co.table) {
    w.i64(key.first);
    w.i64(key.second);
    put_query_result(w, qr);
  }
  w.u64(co.per_landmark.size());
  for (const auto& [lm, ls] : co.per_landmark) {
    w.i64(lm);
    w.u64(ls.intervals.size());
    for (const auto& iv : ls.intervals) {
      w.i64(iv.owner);
      w.i64(iv.start);
      w.i64(iv.end);
    }
    w.u64(ls.points.size());
    for (int p : ls.points) w.i64(p);
    for (const auto& [a, b] : ls.answers) {
      w.i64(a);
      w.i64(b);
    }
  }
  return w.take();
}

CompiledOracle deserialize_compiled(const std::vector<uint8_t>& bytes) {
  ByteReader r(bytes);
  if (r.u64() != kCompiledMagic) throw ParseError("compiled oracle: bad magic");
  if (r.u64() != 1) throw ParseError("compiled oracle: unsupported version");
  CompiledOracle co;
  size_t nf = r.u64();
  for (size_t i = 0; i < nf; ++i) co.failed_ids.push_back((int)r.i64());
  size_t ns = r.u64();
  for (size_t i = 0; i < ns; ++i) co.s_vertices.push_back((int)r.i64());
  size_t nt = r.u64();
  for (size_t i = 0; i < nt; ++i) {
    int a = (int)r.i64();
    int b = (int)r.i64();
    co.table[{a, b}] = get_query_result(r);
  }
  size_t nl = r.u64();
  for (size_t i = 0; i < nl; ++i) {
    int lm = (int)r.i64();
    LaminarStructure ls;
    size_t ni = r.u64();
    for (size_t j = 0; j < ni; ++j) {
      LaminarInterval iv;
      iv.owner = (int)r.i64();
      iv.start = (int)r.i64();
      iv.end = (int)r.i64();
      ls.intervals.push_back(iv);
    }
    size_t np = r.u64();
    for (size_t j = 0; j < np; ++j) ls.points.push_back((int)r.i64());
    for (size_t j = 0; j < np; ++j) {
      int a = (int)r.i64();
      int b = (int)r.i64();
      ls.answers.push_back({a, b});
    }
    co.per_landmark.emplace(lm, std::move(ls));
  }
  r.expect_done();
  return co;
}

std::vector<uint8_t> serialize_tz(const TZStructure& tz) {
  ByteWriter w;
  w.u64(kTzMagic);
  w.u64(1);
  w.i64(tz.k);
  w.u64(tz.sets.size());
  for (const auto& s : tz.sets) {
    w.u64(s.size());
    for (int v : s) w.i64(v);
  }
  w.u64(tz.cluster_trees.size());
  for (const auto& [lm, t] : tz.cluster_trees) {
    w.i64(lm);
    w.i64(t.root);
    w.u64(t.parent.size());
    for (const auto& [c, pe] : t.parent) {
      w.i64(c);
      w.i64(pe.first);
      w.i64(pe.second);
    }
    w.u64(t.tour.seq.size());
    for (int v : t.tour.seq) w.i64(v);
  }
  w.u64(tz.labels.size());
  for (const auto& [v, lbl] : tz.labels) {
    w.i64(v);
    w.u64(lbl.pivots.size());
    for (int p : lbl.pivots) w.i64(p);
    w.u64(lbl.bunch.size());
    for (const auto& [lm, e] : lbl.bunch) {
      w.i64(lm);
      w.i64(std::get<0>(e));
      w.i64(std::get<1>(e));
      w.i64(std::get<2>(e));
    }
  }
  return w.take();
}

TZStructure deserialize_tz(const std::vector<uint8_t>& bytes) {
  ByteReader r(bytes);
  if (r.u64() != kTzMagic) throw ParseError("tz store: bad magic");
  if (r.u64() != 1) throw ParseError("tz store: unsupported version");
  TZStructure tz;
  tz.k = (int)r.i64();
  size_t ns = r.u64();
  tz.sets.resize(ns);
  for (auto& s : tz.sets) {
    size_t cnt = r.u64();
    for (size_t i = 0; i < cnt; ++i) s.push_back((int)r.i64());
  }
  size_t nt = r.u64();
  for (size_t i = 0; i < nt; ++i) {
    int lm = (int)r.i64();
    TzClusterTree t;
    t.root = (int)r.i64();
    size_t np = r.u64();
    for (size_t j = 0; j < np; ++j) {
      int c = (int)r.i64();
      int p = (int)r.i64();
      int id = (int)r.i64();
      t.parent[c] = {p, id};
    }
    size_t sl = r.u64();
    for (size_t j = 0; j < sl; ++j) t.tour.seq.push_back((int)r.i64());
    for (int j = 1; j < (int)t.tour.seq.size(); ++j)
      t.tour.pos[{t.tour.seq[j - 1], t.tour.seq[j]}] = j;
    for (int j = 0; j < (int)t.tour.seq.size(); ++j) {
      if (!t.tour.start.count(t.tour.seq[j])) t.tour.start[t.tour.seq[j]] = j;
      t.tour.end[t.tour.seq[j]] = j;
    }
    tz.cluster_trees.emplace(lm, std::move(t));
  }
  size_t nL = r.u64();
  for (size_t i = 0; i < nL; ++i) {
    int v = (int)r.i64();
    TzVertexLabel lbl;
    lbl.vertex = v;
    size_t np = r.u64();
    for (size_t j = 0; j < np; ++j) lbl.pivots.push_back((int)r.i64());
    size_t nb = r.u64();
    for (size_t j = 0; j < nb; ++j) {
      int lm = (int)r.i64();
      Len d = r.i64();
      int a = (int)r.i64();
      int b = (int)r.i64();
      lbl.bunch[lm] = {d, a, b};
    }
    tz.labels.emplace(v, std::move(lbl));
  }
  r.expect_done();
  return tz;
}

SensitivityOracle::SensitivityOracle(LabelStore ft, TZStructure tz)
    : ft_(std::move(ft)), tz_(std::move(tz)) {}

std::vector<const ELabel*> SensitivityOracle::resolve_failures(
    const std::vector<int>& ids) const {
  std::vector<const ELabel*> out;
  for (int id : ids) {
    if (!ft_.edge_by_id(id))
      throw UsageError("oracle: unknown edge id " + std::to_string(id));
    auto it = ft_.elabels.find(id);
    if (it != ft_.elabels.end() && !it->second.trivial()) {
      out.push_back(&it->second);
      continue;
    }
    // trivial labels are reconstructed from the identifier alone
    auto tp = trivial_pool_.find(id);
    if (tp == trivial_pool_.end()) {
      ELabel el;
      el.edge_id = id;
      tp = trivial_pool_.emplace(id, std::move(el)).first;
    }
    out.push_back(&tp->second);
  }
  return out;
}

QueryResult SensitivityOracle::query(int p, int q,
                                     const std::vector<int>& failed_ids) const {
  Decoder dec(ft_);
  dec.set_failures(resolve_failures(failed_ids));
  return dec.query(ft_.vlabels.at(p), ft_.vlabels.at(q));
}

void SensitivityOracle::change_failures(const std::vector<int>& failed_ids) {
  compiled_ = compile_oracle(ft_, tz_, failed_ids);
  has_compiled_ = true;
}

FastQueryResult SensitivityOracle::fast_distance(int p, int q) const {
  if (!has_compiled_)
    throw UsageError("oracle: fast query before any change-failures call");
  return fast_query(compiled_, tz_.labels.at(p), tz_.labels.at(q));
}

const CompiledOracle& SensitivityOracle::compiled() const {
  if (!has_compiled_) throw UsageError("oracle: nothing compiled");
  return compiled_;
}

long long SensitivityOracle::store_size_bytes() const {
  long long total = 0;
  for (const auto& [v, vl] : ft_.vlabels)
    total += (long long)serialize_vlabel(vl).size();
  for (const auto& [id, el] : ft_.elabels)
    if (!el.trivial()) total += (long long)serialize_elabel(el).size();
  total += (long long)serialize_tz(tz_).size();
  return total;
}

}  // namespace ftl
