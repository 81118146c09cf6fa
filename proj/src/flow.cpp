#include "ftl/flow.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ftl/simplex.hpp"

namespace ftl {

namespace {

struct PairDemand {
  int u, v;  // u < v
  Rat demand;
};

// unordered pair totals; self-pairs route over empty paths and are dropped
std::vector<PairDemand> collapse_pairs(const Demand& d) {
  std::map<std::pair<int, int>, Rat> acc;
  for (const auto& [p, x] : d.values) {
    if (p.first == p.second) continue;
    auto key = std::minmax(p.first, p.second);
    acc[{key.first, key.second}] += x;
  }
  std::vector<PairDemand> out;
  for (auto& [k, x] : acc) out.push_back({k.first, k.second, x});
  return out;
}

// min-cost path among paths of length <= bound, costs >= 0; exact labels
struct RcspResult {
  bool found = false;
  Rat cost;
  std::vector<int> edge_indices;
};

RcspResult rcsp_min_cost(const Graph& g, int src, int dst, Len bound,
                         const std::vector<Rat>& edge_cost) {
  struct Label {
    Len len;
    Rat cost;
    int vertex;
    int parent;    // label index
    int via_edge;  // edge index
    bool popped = false;
  };
  std::vector<Label> arena;
  std::vector<std::vector<int>> frontier(g.n());  // nondominated label ids per vertex
  auto dominated = [&](int v, Len len, const Rat& cost) {
    for (int id : frontier[v])
      if (arena[id].len <= len && arena[id].cost <= cost) return true;
    return false;
  };
  auto insert = [&](int v, Len len, const Rat& cost, int parent, int via) {
    if (len > bound || dominated(v, len, cost)) return;
    auto& fr = frontier[v];
    fr.erase(std::remove_if(fr.begin(), fr.end(),
                            [&](int id) {
                              return len <= arena[id].len && cost <= arena[id].cost;
                            }),
             fr.end());
    arena.push_back({len, cost, v, parent, via, false});
    fr.push_back((int)arena.size() - 1);
  };
  insert(src, 0, Rat(0), -1, -1);
  RcspResult res;
  for (;;) {
    int best = -1;
    for (int id = 0; id < (int)arena.size(); ++id) {
      const Label& l = arena[id];
      if (l.popped) continue;
      bool alive = false;
      for (int fid : frontier[l.vertex])
        if (fid == id) { alive = true; break; }
      if (!alive) continue;
      if (best < 0 || l.cost < arena[best].cost ||
          (l.cost == arena[best].cost && l.len < arena[best].len))
        best = id;
    }
    if (best < 0) break;
    arena[best].popped = true;
    const Len cur_len = arena[best].len;
    const Rat cur_cost = arena[best].cost;
    const int cur_vertex = arena[best].vertex;
    if (cur_vertex == dst) {
      res.found = true;
      res.cost = cur_cost;
      std::vector<int> rev;
      for (int id = best; arena[id].via_edge >= 0; id = arena[id].parent)
        rev.push_back(arena[id].via_edge);
      std::reverse(rev.begin(), rev.end());
      // strip any cycles (cost can only shrink, length can only shrink)
      std::vector<int> stack_v{src};
      std::vector<int> stack_e;
      for (int ei : rev) {
        int nxt = g.edge(ei).other(stack_v.back());
        auto it = std::find(stack_v.begin(), stack_v.end(), nxt);
        if (it != stack_v.end()) {
          size_t keep = it - stack_v.begin();
          stack_v.resize(keep + 1);
          stack_e.resize(keep);
        } else {
          stack_v.push_back(nxt);
          stack_e.push_back(ei);
        }
      }
      res.edge_indices = stack_e;
      return res;
    }
    for (int ei : g.incident(cur_vertex)) {
      const Edge& e = g.edge(ei);
      insert(e.other(cur_vertex), cur_len + e.length, cur_cost + edge_cost[ei],
             best, ei);
    }
    if ((long long)arena.size() > 200000)
      throw ResourceError("rcsp: label explosion");
  }
  return res;
}

std::vector<int> shortest_path_edges(const Graph& g, int u, int v) {
  SsspResult sp = sssp(g, u);
  if (sp.dist[v] == kInfLen) return {};
  std::vector<int> rev;
  int w = v;
  while (w != u) {
    rev.push_back(sp.parent_edge[w]);
    w = g.edge(sp.parent_edge[w]).other(w);
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

Len path_length(const Graph& g, const std::vector<int>& edge_indices) {
  Len l = 0;
  for (int ei : edge_indices) l += g.edge(ei).length;
  return l;
}

struct ExactRouting {
  RoutingResult result;
  std::vector<Rat> pair_duals;  // per collapsed pair
  std::vector<PairDemand> pairs;
};

ExactRouting route_exact(const Graph& g, const std::vector<PairDemand>& pairs,
                         Len h, const FlowOpts& opts) {
  ExactRouting out;
  out.pairs = pairs;
  if (pairs.empty()) {
    out.result.feasible = true;
    out.result.congestion = 0;
    return out;
  }
  int m = g.m();
  // columns per pair, as edge-index lists
  std::vector<std::vector<std::vector<int>>> cols(pairs.size());
  std::vector<std::set<std::vector<int>>> seen(pairs.size());
  long long col_count = 0;
  for (size_t p = 0; p < pairs.size(); ++p) {
    std::vector<int> sp = shortest_path_edges(g, pairs[p].u, pairs[p].v);
    if (sp.empty() || path_length(g, sp) > h) {
      out.result.feasible = false;  // no admissible path at all
      return out;
    }
    cols[p].push_back(sp);
    seen[p].insert(sp);
    ++col_count;
  }

  for (;;) {
    // master LP: min lambda
    int num_cols = 0;
    for (auto& c : cols) num_cols += (int)c.size();
    LpProblem lp;
    lp.num_vars = num_cols + 1;  // + lambda
    int lambda = num_cols;
    lp.obj.assign(lp.num_vars, Rat(0));
    lp.obj[lambda] = 1;
    std::vector<int> col_pair(num_cols), col_local(num_cols);
    {
      int idx = 0;
      for (size_t p = 0; p < pairs.size(); ++p)
        for (size_t c = 0; c < cols[p].size(); ++c) {
          col_pair[idx] = (int)p;
          col_local[idx] = (int)c;
          ++idx;
        }
    }
    std::vector<int> pair_row(pairs.size()), edge_row(m);
    for (size_t p = 0; p < pairs.size(); ++p) {
      std::vector<Rat> row(lp.num_vars, Rat(0));
      for (int j = 0; j < num_cols; ++j)
        if (col_pair[j] == (int)p) row[j] = 1;
      pair_row[p] = lp.add_row(std::move(row), LpRel::kEq, pairs[p].demand);
    }
    for (int e = 0; e < m; ++e) {
      std::vector<Rat> row(lp.num_vars, Rat(0));
      bool any = false;
      for (int j = 0; j < num_cols; ++j) {
        int uses = (int)std::count(cols[col_pair[j]][col_local[j]].begin(),
                                   cols[col_pair[j]][col_local[j]].end(), e);
        if (uses) {
          row[j] = uses;
          any = true;
        }
      }
      row[lambda] = -g.edge(e).capacity;
      (void)any;
      edge_row[e] = lp.add_row(std::move(row), LpRel::kLe, Rat(0));
    }
    LpResult sol = lp_solve(lp, opts.pivot_limit);
    if (sol.status != LpStatus::kOptimal)
      throw Error("route_lp: master LP not optimal");

    // price new columns: w_e = -mu_e >= 0; add path for pair p when its
    // w-cost is strictly below the pair dual y_p
    std::vector<Rat> w(m);
    for (int e = 0; e < m; ++e) {
      w[e] = -sol.duals[edge_row[e]];
      if (w[e] < 0) w[e] = 0;  // exactness: slack reduced cost >= 0
    }
    bool progress = false;
    for (size_t p = 0; p < pairs.size(); ++p) {
      Rat y = sol.duals[pair_row[p]];
      RcspResult rc = rcsp_min_cost(g, pairs[p].u, pairs[p].v, h, w);
      if (rc.found && rc.cost < y) {
        std::vector<int> key = rc.edge_indices;
        if (!seen[p].count(key)) {
          if (++col_count > opts.path_cap)
            throw ResourceError("route_lp: path budget exceeded");
          seen[p].insert(key);
          cols[p].push_back(std::move(key));
          progress = true;
        }
      }
    }
    if (progress) continue;

    // optimal: assemble the flow
    out.result.feasible = true;
    out.result.congestion = sol.x[lambda];
    out.pair_duals.resize(pairs.size());
    for (size_t p = 0; p < pairs.size(); ++p) out.pair_duals[p] = sol.duals[pair_row[p]];
    for (int j = 0; j < num_cols; ++j) {
      if (sol.x[j] == 0) continue;
      FlowPath fp;
      fp.u = pairs[col_pair[j]].u;
      fp.v = pairs[col_pair[j]].v;
      for (int ei : cols[col_pair[j]][col_local[j]]) fp.edge_ids.push_back(g.edge(ei).id);
      fp.value = sol.x[j];
      out.result.max_length_used = std::max(
          out.result.max_length_used, path_length(g, cols[col_pair[j]][col_local[j]]));
      out.result.flow.push_back(std::move(fp));
    }
    return out;
  }
}

RoutingResult greedy_route(const Graph& g, const std::vector<PairDemand>& pairs, Len h) {
  RoutingResult r;
  std::vector<Rat> load(g.m(), Rat(0));
  for (const PairDemand& pd : pairs) {
    std::vector<int> sp = shortest_path_edges(g, pd.u, pd.v);
    if (sp.empty() || path_length(g, sp) > h) {
      r.feasible = false;
      return r;
    }
    for (int ei : sp) load[ei] += pd.demand;
    FlowPath fp;
    fp.u = pd.u;
    fp.v = pd.v;
    for (int ei : sp) fp.edge_ids.push_back(g.edge(ei).id);
    fp.value = pd.demand;
    r.max_length_used = std::max(r.max_length_used, path_length(g, sp));
    r.flow.push_back(std::move(fp));
  }
  r.feasible = true;
  r.congestion = 0;
  for (int e = 0; e < g.m(); ++e) {
    Rat c = load[e] / g.edge(e).capacity;
    if (c > r.congestion) r.congestion = c;
  }
  return r;
}

}  // namespace

RoutingResult route_lp(const Graph& g, const Demand& d, Len h, const FlowOpts& opts) {
  return route_exact(g, collapse_pairs(d), h, opts).result;
}

RoutingResult route_within_budget(const Graph& g, const Demand& d, Len h,
                                  const Rat& budget, const FlowOpts& opts) {
  std::vector<PairDemand> pairs = collapse_pairs(d);
  RoutingResult greedy = greedy_route(g, pairs, h);
  if (greedy.feasible && greedy.congestion <= budget) return greedy;
  if (!greedy.feasible) return greedy;
  return route_exact(g, pairs, h, opts).result;
}

Demand ldd_demand(const NodeWeighting& a, const NeighborhoodCover& cover) {
  Demand d;
  d.length_bound = cover.h_diam;
  int omega = cover.width();
  if (omega == 0) return d;
  for (const Clustering& cl : cover.clusterings) {
    for (const auto& s : cl.clusters) {
      Rat a_s = a.sum_over(s);
      if (a_s == 0) continue;
      for (int u : s) {
        Rat au = a.value(u);
        if (au == 0) continue;
        for (int v : s) {
          Rat av = a.value(v);
          if (av == 0) continue;
          d.add(u, v, au * av / (2 * a_s * omega));
        }
      }
    }
  }
  return d;
}

namespace {

// min sum u(e)*c(e), 0 <= c <= 1, with lazily separated covering constraints
// sum_{e in P} c(e) >= 1 over all paths P of length <= bound between targets
std::vector<Rat> fractional_cover_lp(const Graph& g,
                                     const std::vector<std::pair<int, int>>& targets,
                                     Len bound, const FlowOpts& opts) {
  int m = g.m();
  std::vector<std::vector<int>> path_rows;
  for (;;) {
    LpProblem lp;
    lp.num_vars = m;
    lp.obj.resize(m);
    for (int e = 0; e < m; ++e) lp.obj[e] = g.edge(e).capacity;
    for (int e = 0; e < m; ++e) {
      std::vector<Rat> row(m, Rat(0));
      row[e] = 1;
      lp.add_row(std::move(row), LpRel::kLe, Rat(1));
    }
    for (const auto& pr : path_rows) {
      std::vector<Rat> row(m, Rat(0));
      for (int ei : pr) row[ei] += 1;
      lp.add_row(std::move(row), LpRel::kGe, Rat(1));
    }
    LpResult sol = lp_solve(lp, opts.pivot_limit);
    if (sol.status != LpStatus::kOptimal)
      throw Error("cover lp: not optimal");
    bool violated = false;
    for (const auto& [u, v] : targets) {
      RcspResult rc = rcsp_min_cost(g, u, v, bound, sol.x);
      if (rc.found && rc.cost < 1) {
        path_rows.push_back(rc.edge_indices);
        violated = true;
      }
    }
    if (!violated) return sol.x;
    if ((long long)path_rows.size() > opts.path_cap)
      throw ResourceError("cover lp: path budget exceeded");
  }
}

}  // namespace

CutCertificate cut_or_certify(const Graph& g, const NodeWeighting& a, Len h,
                              long long s, long long s_prime, const Rat& phi,
                              const FlowOpts& opts) {
  if (s_prime < 4 || s < 8 * s_prime)
    throw UsageError("cut_or_certify: need s' >= 4 and s >= 8s'");
  if (phi <= 0) throw UsageError("cut_or_certify: phi must be positive");
  Len hs = h * (Len)s;
  Len bound = (h * (Len)s) / 4;

  CutCertificate res;
  if (a.is_zero()) {
    res.certified = true;
    res.expansion = {0, Rat(0), Rat(0), bound, Rat(0)};
    return res;
  }
  NeighborhoodCover cover = build_cover(g, h, (int)s_prime);
  Demand ldd = ldd_demand(a, cover);
  int omega = cover.width();
  Rat gamma = Rat(1) / (4 * omega * phi);

  std::vector<PairDemand> pairs = collapse_pairs(ldd);
  RoutingResult greedy = greedy_route(g, pairs, bound);
  if (greedy.feasible && greedy.congestion <= gamma) {
    res.certified = true;
    res.expansion = {omega, gamma, greedy.congestion, bound, ldd.total()};
    return res;
  }
  ExactRouting exact = route_exact(g, pairs, bound, opts);
  if (!exact.result.feasible)
    throw Error("cut_or_certify: LDD pair without admissible path (cover broken)");
  if (exact.result.congestion <= gamma) {
    res.certified = true;
    res.expansion = {omega, gamma, exact.result.congestion, bound, ldd.total()};
    return res;
  }

  // sparse-cut extraction: separate dual-expensive pairs, pick the measured-
  // sparsest candidate
  std::vector<size_t> order(pairs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    if (exact.pair_duals[x] != exact.pair_duals[y])
      return exact.pair_duals[x] > exact.pair_duals[y];
    return x < y;
  });
  std::vector<std::vector<std::pair<int, int>>> candidates;
  std::vector<size_t> prefix_sizes;
  if (order.size() >= 1) prefix_sizes.push_back(1);
  if (order.size() >= 4) prefix_sizes.push_back(order.size() / 2);
  prefix_sizes.push_back(order.size());
  for (size_t ps : prefix_sizes) {
    std::vector<std::pair<int, int>> t;
    for (size_t i = 0; i < ps; ++i)
      t.push_back({pairs[order[i]].u, pairs[order[i]].v});
    candidates.push_back(std::move(t));
  }

  bool have_best = false;
  MovingCut best_cut;
  Demand best_witness;
  Rat best_sparsity;
  for (const auto& targets : candidates) {
    std::vector<Rat> c = fractional_cover_lp(g, targets, hs, opts);
    MovingCut cut;
    cut.h = hs;
    for (int e = 0; e < g.m(); ++e) {
      if (c[e] == 0) continue;
      Rat grid = Rat(rat_ceil(c[e] * rat_len(hs))) / rat_len(hs);
      if (grid > 1) grid = 1;
      cut.set(g.edge(e).id, grid);
    }
    if (cut.is_zero()) continue;
    Graph after = apply_cut(g, cut, hs);
    Demand witness;
    witness.length_bound = h * (Len)s_prime;
    std::map<int, SsspResult> from;
    for (const auto& [p, x] : ldd.values) {
      if (p.first == p.second) continue;
      auto it = from.find(p.first);
      if (it == from.end()) it = from.emplace(p.first, sssp(after, p.first)).first;
      if (it->second.dist[p.second] > hs) witness.add(p.first, p.second, x);
    }
    if (witness.is_zero()) continue;
    DemandStats st = demand_stats(cut, witness, g, hs);
    if (st.sparsity_infinite) continue;
    if (!have_best || st.sparsity < best_sparsity) {
      have_best = true;
      best_cut = std::move(cut);
      best_witness = std::move(witness);
      best_sparsity = st.sparsity;
    }
  }
  if (!have_best)
    throw Error("cut_or_certify: routing over budget but no separating cut found");
  res.certified = false;
  res.cut = std::move(best_cut);
  res.witness = std::move(best_witness);
  res.phi_prime = best_sparsity;
  return res;
}

CutUntilCertifyResult cut_until_certify(const Graph& g, const NodeWeighting& a,
                                        Len h, long long s, const Rat& phi,
                                        CutMode mode, const FlowOpts& opts) {
  (void)mode;  // both modes share the constructive path; split below
  if (s < 64) throw UsageError("cut_until_certify: need s >= 64");
  long long s_prime = (long long)std::floor(std::sqrt((double)s));
  while (s_prime * s_prime > s) --s_prime;
  CutUntilCertifyResult out;
  out.cut.h = h * (Len)s;
  long long max_rounds = (long long)g.n() * (g.n() - 1) / 2 + 1;
  for (;;) {
    Graph cur = out.cut.is_zero() ? g : apply_cut(g, out.cut, h * (Len)s);
    CutCertificate c = cut_or_certify(cur, a, h, s, s_prime, phi, opts);
    if (c.certified) {
      out.final_certificate = c.expansion;
      return out;
    }
    out.cut.add(c.cut);
    out.increments.push_back({c.cut, c.phi_prime});
    if (++out.nonzero_rounds > max_rounds)
      throw Error("cut_until_certify: exceeded the n-choose-2 round bound");
  }
}

UnionCutReport union_cut_diagnostic(
    const Graph& g0, const NodeWeighting& a,
    const std::vector<std::pair<MovingCut, Rat>>& cuts, Len h, long long s) {
  UnionCutReport rep;
  int n = g0.n();
  Len hs = h * (Len)s;
  rep.sum_size_over_phi = 0;
  rep.a_total_ln_n = rat_double(a.total()) * std::log(std::max(2, n));
  rep.monotone = true;

  Graph cur = g0;
  std::vector<std::vector<Len>> prev_dist;
  auto all_pairs = [&](const Graph& gg) {
    std::vector<std::vector<Len>> d(n);
    for (int v = 0; v < n; ++v) d[v] = sssp(gg, v).dist;
    return d;
  };
  auto potential = [&](const std::vector<std::vector<Len>>& d) {
    double p = 0;
    for (const auto& [v, av] : a.entries()) {
      double wv = 0;
      for (int u = 0; u < n; ++u) {
        if (d[v][u] == kInfLen || 2 * d[v][u] > hs) continue;
        wv += std::pow((double)std::max(2, n), -2.0 * (double)d[v][u] / (double)hs);
      }
      if (wv > 0) p += rat_double(av) * std::log(wv);
    }
    return p;
  };

  std::vector<std::vector<Len>> d = all_pairs(cur);
  rep.potentials.push_back(potential(d));
  for (const auto& [c, phi] : cuts) {
    rep.cut_sizes.push_back(c.size(g0));
    rep.phis.push_back(phi);
    if (phi <= 0) throw UsageError("union_cut_diagnostic: phi must be positive");
    rep.sum_size_over_phi += c.size(g0) / phi;
    cur = apply_cut(cur, c, hs);
    prev_dist = std::move(d);
    d = all_pairs(cur);
    for (int v = 0; v < n && rep.monotone; ++v)
      for (int u = 0; u < n; ++u)
        if (d[v][u] < prev_dist[v][u]) { rep.monotone = false; break; }
    rep.potentials.push_back(potential(d));
  }
  return rep;
}

}  // namespace ftl
