#include "ftl/harness.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <queue>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ftl/hitting.hpp"
#include "json.hpp"

namespace ftl {

using ordered_json = nlohmann::ordered_json;

uint64_t SeededRng::next() {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t SeededRng::below(uint64_t bound) { return bound ? next() % bound : 0; }

long long SeededRng::range(long long lo, long long hi) {
  return lo + (long long)below((uint64_t)(hi - lo + 1));
}

Graph generate_graph(uint64_t seed, int n_min, int n_max, int m_max, Len len_max) {
  SeededRng rng(seed);
  int n = (int)rng.range(n_min, n_max);
  std::vector<Edge> edges;
  int id = 0;
  bool connected = rng.below(4) != 0;
  auto tree_on = [&](int lo, int hi) {  // spanning tree over [lo, hi)
    for (int v = lo + 1; v < hi; ++v) {
      int u = lo + (int)rng.below((uint64_t)(v - lo));
      edges.push_back({id++, u, v, rng.range(1, len_max), Rat(1)});
    }
  };
  if (connected || n < 4) {
    tree_on(0, n);
  } else {
    int split = (int)rng.range(2, n - 2);
    tree_on(0, split);
    tree_on(split, n);
  }
  int extra = (int)rng.range(0, std::max(0, m_max - (int)edges.size()));
  for (int t = 0; t < extra && (int)edges.size() < m_max; ++t) {
    if (n < 2) break;
    int u = (int)rng.below((uint64_t)n);
    int v = (int)rng.below((uint64_t)n);
    if (u == v) continue;
    edges.push_back({id++, u, v, rng.range(1, len_max), Rat(1)});
  }
  Graph g(n, std::move(edges));
  g.set_declared_length_bound(len_max);
  return g;
}

TestInstance generate_instance(const InstanceProfile& profile, uint64_t index) {
  TestInstance inst;
  SeededRng mix(profile.seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  inst.seed = mix.next();
  inst.g = generate_graph(inst.seed, profile.n_min, profile.n_max, profile.m_max,
                          profile.len_max);
  std::vector<int> ids;
  for (const Edge& e : inst.g.edges()) ids.push_back(e.id);
  inst.failure_sets.push_back({});
  if (profile.max_failures >= 1)
    for (int a : ids) inst.failure_sets.push_back({a});
  if (profile.max_failures >= 2)
    for (size_t x = 0; x < ids.size(); ++x)
      for (size_t y = x + 1; y < ids.size(); ++y)
        inst.failure_sets.push_back({ids[x], ids[y]});
  for (int p = 0; p < inst.g.n(); ++p)
    for (int q = p + 1; q < inst.g.n(); ++q) inst.query_pairs.push_back({p, q});
  return inst;
}

Len brute_distance(const Graph& g, const std::vector<int>& failed_ids, int p, int q) {
  std::set<int> failed(failed_ids.begin(), failed_ids.end());
  std::vector<Len> dist(g.n(), kInfLen);
  using Item = std::pair<Len, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[p] = 0;
  pq.push({0, p});
  while (!pq.empty()) {
    auto [dv, v] = pq.top();
    pq.pop();
    if (dv != dist[v]) continue;
    for (int ei : g.incident(v)) {
      const Edge& e = g.edge(ei);
      if (failed.count(e.id)) continue;
      int w = e.other(v);
      if (dv + e.length < dist[w]) {
        dist[w] = dv + e.length;
        pq.push({dist[w], w});
      }
    }
  }
  return dist[q];
}

namespace {

std::vector<std::vector<Len>> brute_all_pairs(const Graph& g,
                                              const std::vector<int>& failed_ids) {
  std::set<int> failed(failed_ids.begin(), failed_ids.end());
  std::vector<std::vector<Len>> d(g.n(), std::vector<Len>(g.n(), kInfLen));
  for (int s = 0; s < g.n(); ++s) {
    d[s][s] = 0;
    using Item = std::pair<Len, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    pq.push({0, s});
    while (!pq.empty()) {
      auto [dv, v] = pq.top();
      pq.pop();
      if (dv != d[s][v]) continue;
      for (int ei : g.incident(v)) {
        const Edge& e = g.edge(ei);
        if (failed.count(e.id)) continue;
        int w = e.other(v);
        if (dv + e.length < d[s][w]) {
          d[s][w] = dv + e.length;
          pq.push({d[s][w], w});
        }
      }
    }
  }
  return d;
}

struct Counter {
  CriterionResult* r;
  void check(bool ok, const std::string& what = "") {
    ++r->checked;
    if (!ok) {
      ++r->failed;
      if (r->detail.size() < 500) r->detail += (r->detail.empty() ? "" : "; ") + what;
    }
  }
};

}  // namespace

SuiteReport validate_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  auto& cs = rep.criteria;
  cs.resize(10);
  cs[0].name = "1 soundness & stretch sweep (UNREACHABLE iff; est <= s * dist)";
  cs[1].name = "2 lower bound (est >= dist)";
  cs[2].name = "3 euler-tour recovery (coverage + union-find)";
  cs[3].name = "4 hierarchy validation (nestedness, bookkeeping, certification)";
  cs[4].name = "5 hitting sets (P hit, Q within alpha; DP vs brute force)";
  cs[5].name = "6 TZ stretch (<= 2k-1)";
  cs[6].name = "7 fast-query sandwich";
  cs[7].name = "8 pack/unpack equivalence";
  cs[8].name = "9 diagnostics (ELabel bound, potential monotone; sizes logged)";
  cs[9].name = "10 determinism (byte-identical rebuilds)";
  Counter c1{&cs[0]}, c2{&cs[1]}, c3{&cs[2]}, c4{&cs[3]}, c5{&cs[4]}, c6{&cs[5]},
      c7{&cs[6]}, c8{&cs[7]}, c9{&cs[8]}, c10{&cs[9]};

  const long long s_dec = cfg.profile.labels.stretch();
  const int k = cfg.profile.labels.k;
  long long pack_done = 0;
  long long query_counter = 0;
  const int hier_recheck_graphs = 10;
  double sum_ratio_log = 0, a_lnn_log = 0;
  long long vbytes_max = 0, ebytes_max = 0;

  for (int gi = 0; gi < cfg.sweep_graphs; ++gi) {
    TestInstance inst = generate_instance(cfg.profile, (uint64_t)gi);
    if (cfg.progress)
      std::fprintf(stderr, "[suite] graph %d/%d n=%d m=%d\n", gi + 1,
                   cfg.sweep_graphs, inst.g.n(), inst.g.m());
    LabelScheme scheme = build_labels(inst.g, cfg.profile.labels);
    LabelStore store = store_from_scheme(scheme);
    TZStructure tz = tz_build(inst.g, k);

    // criterion 4: exact hierarchy checks on every scale; expansion re-check
    // by LP on the leading graphs (it reruns the build-time certification)
    for (const ScaleBundle& b : scheme.bundles) {
      HierarchyReport hr = validate_hierarchy_exact(b.hier, inst.g);
      for (const auto& ck : hr.checks) c4.check(ck.pass, ck.name + ": " + ck.detail);
      for (const auto& lc : b.level_certs) c4.check(lc.pass, lc.name);
      if (gi < hier_recheck_graphs) {
        HierarchyReport full = validate_hierarchy(b.hier, inst.g);
        for (const auto& ck : full.checks) c4.check(ck.pass, ck.name + ": " + ck.detail);
      }
    }

    // criterion 5: re-validate every constructed L_j by direct set arithmetic
    for (const ScaleBundle& b : scheme.bundles) {
      std::vector<const ClusterTree*> trees;
      for (const ClusterEntry& ce : b.clusters) trees.push_back(&ce.tree);
      for (int j = 1; j <= cfg.profile.labels.d; ++j) {
        ConstraintSystem sys =
            build_constraints(inst.g, b.hier.cuts[j], b.hier.levels[j], trees,
                              b.params.tau_hit, b.params.tau_heavy);
        SelectResult sel = derandomized_select(sys);
        c5.check(sel.selected == b.sampled[j], "L_j selection not reproducible");
        for (const auto& pset : sys.p_sets) {
          int hit = 0;
          for (int e : pset) hit += (int)b.sampled[j].count(e);
          c5.check(hit >= 1, "P-set missed");
        }
        for (const auto& qset : sys.q_sets) {
          long long inside = 0;
          for (int e : qset) inside += (long long)b.sampled[j].count(e);
          c5.check(Rat((long)inside) <= sel.alpha, "Q-set above alpha");
        }
      }
    }

    // criterion 9: potential monotonicity + the Sigma |C|/phi diagnostic
    for (const ScaleBundle& b : scheme.bundles) {
      for (int lvl = 0; lvl < cfg.profile.labels.d; ++lvl) {
        if (b.hier.increments_by_level[lvl].empty()) continue;
        UnionCutReport ur = union_cut_diagnostic(
            inst.g, b.hier.levels[lvl], b.hier.increments_by_level[lvl],
            b.params.h_ed, cfg.profile.labels.s_ed);
        c9.check(ur.monotone, "potential not monotone");
        for (size_t t = 1; t < ur.potentials.size(); ++t)
          c9.check(ur.potentials[t] <= ur.potentials[t - 1] + 1e-9,
                   "float potential increased");
        sum_ratio_log += rat_double(ur.sum_size_over_phi);
        a_lnn_log += ur.a_total_ln_n;
      }
    }
    c9.check(scheme.nontrivial_elabels <= scheme.cluster_size_bound,
             "non-trivial edge label count above the cluster-size bound");
    {
      LabelSizeReport sz = measure_labels(scheme);
      vbytes_max = std::max(vbytes_max, sz.max_vlabel_bytes);
      ebytes_max = std::max(ebytes_max, sz.max_expanded_elabel);
    }

    // criteria 1, 2, 7, 8: the sweep proper
    Decoder dec(store);
    for (const auto& fset : inst.failure_sets) {
      std::vector<const ELabel*> failed;
      for (int id : fset) failed.push_back(&store.elabels.at(id));
      dec.set_failures(failed);
      auto truth = brute_all_pairs(inst.g, fset);
      CompiledOracle co = compile_oracle(store, tz, fset);
      for (auto [p, q] : inst.query_pairs) {
        Len d_true = truth[p][q];
        QueryResult qr = dec.query(store.vlabels.at(p), store.vlabels.at(q));
        if (d_true == kInfLen) {
          c1.check(qr.unreachable, "reachable estimate for a disconnected pair");
        } else {
          c1.check(!qr.unreachable, "UNREACHABLE for a connected pair");
          if (!qr.unreachable) {
            c1.check(qr.estimate <= s_dec * d_true, "estimate above s * dist");
            c2.check(qr.estimate >= d_true, "estimate below true distance");
          }
        }
        FastQueryResult fq = fast_query(co, tz.labels.at(p), tz.labels.at(q));
        if (d_true == kInfLen) {
          c7.check(fq.unreachable, "fast query reachable for a disconnected pair");
        } else {
          c7.check(!fq.unreachable, "fast query UNREACHABLE for a connected pair");
          if (!fq.unreachable) {
            c7.check(fq.estimate >= d_true, "fast estimate below true distance");
            c7.check(fq.estimate <= (2 * s_dec * k + 2 * k - 1) * d_true,
                     "fast estimate above the sandwich bound");
          }
        }
        ++query_counter;
        if (pack_done < cfg.pack_samples && query_counter % 9173 == 1) {
          Len packed = dec.packed_distance(store.vlabels.at(p), store.vlabels.at(q));
          Len unpacked = dec.unpacked_distance(store.vlabels.at(p), store.vlabels.at(q));
          c8.check(packed == unpacked, "packed distance differs from unpacked");
          ++pack_done;
        }
      }
    }
  }
  // a dedicated cut sequence so the potential diagnostic always has data:
  // two unit triangles joined by a bridge, driven at a tight sparsity
  {
    Graph bridge(6, {{0, 0, 1, 1, Rat(1)},
                     {1, 0, 2, 1, Rat(1)},
                     {2, 1, 2, 1, Rat(1)},
                     {3, 2, 3, 1, Rat(1)},
                     {4, 3, 4, 1, Rat(1)},
                     {5, 3, 5, 1, Rat(1)},
                     {6, 4, 5, 1, Rat(1)}});
    NodeWeighting a = deg_weighting(bridge);
    CutUntilCertifyResult cr =
        cut_until_certify(bridge, a, 1, 100, Rat(1, 5), CutMode::kPoly);
    c9.check(!cr.increments.empty(), "bridge diagnostic produced no cuts");
    UnionCutReport ur = union_cut_diagnostic(bridge, a, cr.increments, 1, 100);
    c9.check(ur.monotone, "bridge diagnostic potential not monotone");
    for (size_t t = 1; t < ur.potentials.size(); ++t)
      c9.check(ur.potentials[t] <= ur.potentials[t - 1] + 1e-9,
               "bridge diagnostic float potential increased");
    sum_ratio_log += rat_double(ur.sum_size_over_phi);
    a_lnn_log += ur.a_total_ln_n;
  }
  cs[8].detail += (cs[8].detail.empty() ? "" : "; ") +
                  std::string("sum|C|/phi = ") + std::to_string(sum_ratio_log) +
                  ", |A| ln n total = " + std::to_string(a_lnn_log) +
                  ", max vlabel bytes = " + std::to_string(vbytes_max) +
                  ", max expanded elabel bytes = " + std::to_string(ebytes_max);

  // criterion 3: euler-tour coverage and recovery, counted instances
  {
    SeededRng rng(cfg.seed ^ 0xE77E37ULL);
    long long done = 0;
    while (done < cfg.euler_instances) {
      int n = 2 + (int)rng.below(39);
      std::vector<Edge> es;
      for (int v = 1; v < n; ++v)
        es.push_back({v - 1, (int)rng.below((uint64_t)v), v, rng.range(1, 4), Rat(1)});
      Graph tree(n, std::move(es));
      std::vector<int> all(n);
      std::iota(all.begin(), all.end(), 0);
      ClusterTree t = build_cluster_tree(tree, all);
      NodeWeighting a;
      for (int v = 0; v < n; ++v) a.set(v, Rat((long)rng.below(5)));
      std::set<std::pair<int, int>> failset;
      for (const auto& [child, pe] : t.parent)
        if (rng.below(3) == 0) failset.insert({child, pe.first});
      // union-find truth
      std::vector<int> uf(n);
      std::iota(uf.begin(), uf.end(), 0);
      std::function<int(int)> find = [&](int x) {
        return uf[x] == x ? x : uf[x] = find(uf[x]);
      };
      for (const auto& [child, pe] : t.parent)
        if (!failset.count({child, pe.first})) uf[find(child)] = find(pe.first);

      // recovery equals union-find
      std::vector<SubtreeRecord> recs;
      for (auto [child, parent] : failset) {
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
      std::map<int, int> comp_of;
      for (int v = 0; v < n; ++v)
        comp_of[v] = locate_component(comps, t.tour.start.at(v));
      bool rec_ok = true;
      for (int u = 0; u < n && rec_ok; ++u)
        for (int v = 0; v < n; ++v)
          if ((find(u) == find(v)) != (comp_of[u] == comp_of[v])) {
            rec_ok = false;
            break;
          }
      c3.check(rec_ok, "recovered components mismatch union-find");

      // coverage for light components
      Rat tau = Rat((long)rng.below(10));
      std::map<int, std::vector<int>> members;
      for (int v = 0; v < n; ++v) members[find(v)].push_back(v);
      for (auto& [root, ms] : members) {
        Rat mass = 0;
        for (int v : ms) mass += a.value(v);
        if (mass > tau) continue;
        std::set<int> covered;
        bool any = false;
        for (auto [child, parent] : failset) {
          int into, from;
          if (find(child) == root) { into = child; from = parent; }
          else if (find(parent) == root) { into = parent; from = child; }
          else continue;
          any = true;
          int tpos = t.tour.pos.at({from, into});
          int tend = maximal_interval(t.tour, tpos, a, tau);
          for (int i = tpos; i < tend; ++i) covered.insert(t.tour.at(i));
        }
        if (!any) continue;
        bool ok = true;
        for (int v : ms) ok = ok && covered.count(v);
        c3.check(ok, "light component not covered by inbound intervals");
        ++done;
      }
    }
  }

  // criterion 5 part two: DP probabilities against brute-force enumeration
  {
    SeededRng rng(cfg.seed ^ 0xD9ULL);
    for (int it = 0; it < 40; ++it) {
      int kk = 1 + (int)rng.below(12);
      std::vector<Rat> rhos;
      for (int i = 0; i < kk; ++i) {
        Rat r((long)rng.below(5), 4);
        r.canonicalize();
        rhos.push_back(r > 1 ? Rat(1) : r);
      }
      long long already = (long long)rng.below(3);
      Rat alpha((long)rng.below(10), 2);
      alpha.canonicalize();
      Rat dp = exceed_probability(rhos, already, alpha);
      Rat brute = 0;
      for (int mask = 0; mask < (1 << kk); ++mask) {
        Rat pr = 1;
        long long cnt = already;
        for (int i = 0; i < kk; ++i) {
          if (mask & (1 << i)) {
            pr *= rhos[i];
            ++cnt;
          } else {
            pr *= (1 - rhos[i]);
          }
        }
        if (Rat((long)cnt) > alpha) brute += pr;
      }
      c5.check(dp == brute, "DP probability differs from enumeration");
    }
  }

  // criterion 6: TZ stretch, exhaustive pairs on seeded graphs up to n_max
  {
    SeededRng rng(cfg.seed ^ 0x72ULL);
    for (int it = 0; it < cfg.tz_graphs; ++it) {
      int n = 2 + (int)rng.below((uint64_t)(cfg.tz_n_max - 1));
      Graph g = generate_graph(rng.next(), n, n, 3 * n, 8);
      auto truth = brute_all_pairs(g, {});
      for (int kk : {1, 2, 3}) {
        TZStructure tz = tz_build(g, kk);
        for (int p = 0; p < n; ++p)
          for (int q = p + 1; q < n; ++q) {
            TzEstimate est = tz_query(tz.labels.at(p), tz.labels.at(q));
            if (truth[p][q] == kInfLen) {
              c6.check(!est.reachable, "TZ estimate for a disconnected pair");
            } else {
              c6.check(est.reachable, "TZ unreachable for a connected pair");
              if (est.reachable) {
                c6.check(est.estimate >= truth[p][q], "TZ estimate below distance");
                c6.check(est.estimate <= (2 * kk - 1) * truth[p][q],
                         "TZ estimate above (2k-1) distance");
              }
            }
          }
      }
    }
  }

  // criterion 10: determinism of the full pipeline
  {
    for (int it = 0; it < cfg.determinism_graphs; ++it) {
      TestInstance inst = generate_instance(cfg.profile, (uint64_t)(900 + it));
      auto build_once = [&]() {
        LabelScheme scheme = build_labels(inst.g, cfg.profile.labels);
        LabelStore store = store_from_scheme(scheme);
        TZStructure tz = tz_build(inst.g, k);
        std::vector<uint8_t> bytes = serialize_store(store);
        std::vector<uint8_t> tzb = serialize_tz(tz);
        std::vector<uint8_t> cb;
        if (inst.g.m() >= 2) {
          std::vector<int> f{inst.g.edge(0).id, inst.g.edge(1).id};
          cb = serialize_compiled(compile_oracle(store, tz, f));
        }
        return std::make_tuple(bytes, tzb, cb);
      };
      auto [b1, t1, c1b] = build_once();
      auto [b2, t2, c2b] = build_once();
      c10.check(b1 == b2, "label store bytes differ across rebuilds");
      c10.check(t1 == t2, "tz bytes differ across rebuilds");
      c10.check(c1b == c2b, "compiled oracle bytes differ across rebuilds");
      // round trip
      LabelStore rt = deserialize_store(b1);
      c10.check(serialize_store(rt) == b1, "store round-trip not identical");
    }
  }

  rep.pass = true;
  for (auto& c : cs) {
    c.pass = (c.failed == 0);
    rep.pass = rep.pass && c.pass;
  }
  return rep;
}

std::string SuiteReport::to_json() const {
  ordered_json j;
  j["pass"] = pass;
  j["criteria"] = ordered_json::array();
  for (const auto& c : criteria) {
    ordered_json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["asserted"] = c.asserted;
    e["checked"] = c.checked;
    e["failed"] = c.failed;
    e["detail"] = c.detail;
    j["criteria"].push_back(e);
  }
  return j.dump(2);
}

std::vector<BenchRow> run_bench(const SuiteConfig& cfg) {
  std::vector<BenchRow> rows;
  int graphs = std::min(cfg.sweep_graphs, 5);
  for (int gi = 0; gi < graphs; ++gi) {
    TestInstance inst = generate_instance(cfg.profile, (uint64_t)gi);
    auto t0 = std::chrono::steady_clock::now();
    LabelScheme scheme = build_labels(inst.g, cfg.profile.labels);
    LabelStore store = store_from_scheme(scheme);
    TZStructure tz = tz_build(inst.g, cfg.profile.labels.k);
    auto t1 = std::chrono::steady_clock::now();
    LabelSizeReport sz = measure_labels(scheme);

    Decoder dec(store);
    long long nq = 0;
    auto t2 = std::chrono::steady_clock::now();
    for (size_t fi = 0; fi < inst.failure_sets.size() && fi < 20; ++fi) {
      std::vector<const ELabel*> failed;
      for (int id : inst.failure_sets[fi]) failed.push_back(&store.elabels.at(id));
      dec.set_failures(failed);
      for (auto [p, q] : inst.query_pairs) {
        dec.query(store.vlabels.at(p), store.vlabels.at(q));
        ++nq;
      }
    }
    auto t3 = std::chrono::steady_clock::now();
    CompiledOracle co = compile_oracle(store, tz, inst.failure_sets.back());
    long long nfq = 0;
    auto t4 = std::chrono::steady_clock::now();
    for (auto [p, q] : inst.query_pairs) {
      fast_query(co, tz.labels.at(p), tz.labels.at(q));
      ++nfq;
    }
    auto t5 = std::chrono::steady_clock::now();

    BenchRow row;
    row.seed = inst.seed;
    row.n = inst.g.n();
    row.m = inst.g.m();
    row.vlabel_bytes_max = sz.max_vlabel_bytes;
    row.elabel_bytes_max = sz.max_expanded_elabel;
    row.store_bytes = (long long)serialize_store(store).size();
    row.build_seconds = std::chrono::duration<double>(t1 - t0).count();
    row.query_micros_avg =
        nq ? std::chrono::duration<double, std::micro>(t3 - t2).count() / (double)nq : 0;
    row.fastquery_micros_avg =
        nfq ? std::chrono::duration<double, std::micro>(t5 - t4).count() / (double)nfq
            : 0;
    rows.push_back(row);
  }
  return rows;
}

std::string hierarchy_to_json(const Hierarchy& h) {
  ordered_json j;
  j["h"] = (long long)h.h;
  j["s_ed"] = (long long)h.s_ed;
  j["d"] = h.d;
  j["phi"] = h.phi.get_str();
  j["gamma"] = h.gamma_measured.get_str();
  j["levels"] = ordered_json::array();
  for (int i = 0; i <= h.d; ++i) {
    ordered_json lvl;
    lvl["size"] = h.levels[i].total().get_str();
    ordered_json entries = ordered_json::object();
    for (const auto& [v, x] : h.levels[i].entries())
      entries[std::to_string(v)] = x.get_str();
    lvl["entries"] = entries;
    j["levels"].push_back(lvl);
  }
  j["cuts"] = ordered_json::array();
  for (int i = 1; i <= h.d; ++i) {
    ordered_json cut;
    cut["size"] = h.cuts[i].size(h.base).get_str();
    ordered_json entries = ordered_json::object();
    for (const auto& [e, x] : h.cuts[i].values)
      entries[std::to_string(e)] = x.get_str();
    cut["entries"] = entries;
    j["cuts"].push_back(cut);
  }
  j["nonzero_delta"] = h.nonzero_delta;
  return j.dump(2);
}

}  // namespace ftl
