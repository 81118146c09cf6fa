#include "ftl/hierarchy.hpp"

#include <cmath>

namespace ftl {

Graph Hierarchy::with_cut_applied(int i) const {
  if (i < 1 || i > d) throw UsageError("hierarchy: cut index out of range");
  if (cuts[i].is_zero()) return base;
  return apply_cut(base, cuts[i], h * (Len)s_ed);
}

Hierarchy make_hierarchy(const Graph& g, Len h, long long s_ed, const Rat& phi,
                         int d, CutMode mode, const FlowOpts& flow) {
  if (d < 1) throw UsageError("hierarchy: depth must be >= 1");
  if (s_ed < 100) throw UsageError("hierarchy: length slack must be >= 100");
  if (phi <= 0 || phi > Rat(1, 2)) throw UsageError("hierarchy: need 0 < phi <= 1/2");
  Hierarchy hh;
  hh.base = g;
  hh.h = h;
  hh.s_ed = s_ed;
  hh.phi = phi;
  hh.d = d;
  hh.mode = mode;
  hh.flow = flow;
  hh.levels.assign(d + 1, NodeWeighting{});
  hh.cuts.assign(d + 1, MovingCut{});
  for (int i = 0; i <= d; ++i) hh.cuts[i].h = h * (Len)s_ed;
  hh.nonzero_delta.assign(d, 0);
  hh.increments_by_level.assign(d, {});
  hh.gamma_measured = 0;
  return hh;
}

namespace {

NodeWeighting rec_update(Hierarchy& hh, NodeWeighting delta_a, int j) {
  long long pair_bound = (long long)hh.base.n() * (hh.base.n() - 1) / 2;
  if (j < hh.d) {
    for (;;) {
      Graph cur = hh.with_cut_applied(j + 1);
      CutUntilCertifyResult r = cut_until_certify(
          cur, hh.levels[j].plus(delta_a), hh.h, hh.s_ed, hh.phi, hh.mode, hh.flow);
      if (r.cut.is_zero()) break;
      hh.cuts[j + 1].add(r.cut);
      if (++hh.nonzero_delta[j] > pair_bound)
        throw Error("hierarchy: nonzero-cut counter exceeded n(n-1)/2");
      for (auto& inc : r.increments)
        hh.increments_by_level[j].push_back(inc);
      delta_a = delta_a.plus(rec_update(hh, deg_of_cut(hh.base, r.cut), j + 1));
    }
  }
  hh.levels[j] = hh.levels[j].plus(delta_a);
  return delta_a;
}

}  // namespace

void hierarchy_update(Hierarchy& state, const NodeWeighting& a_new) {
  if (!state.a.leq(a_new))
    throw UsageError("hierarchy_update: updates must be incremental (a_new >= A)");
  NodeWeighting delta = a_new.minus(state.a);
  state.a = a_new;
  if (delta.is_zero()) return;
  rec_update(state, delta, 0);
  state.gamma_measured = measure_gamma(state);
}

Rat measure_gamma(const Hierarchy& h) {
  Rat gamma = 0;
  for (int j = 0; j < h.d; ++j) {
    Rat aj = h.levels[j].total();
    if (aj == 0) continue;
    Rat shrink = h.levels[j + 1].total() / aj;
    Rat degfrac = 2 * deg_of_cut(h.base, h.cuts[j + 1]).total() / aj;
    if (shrink > gamma) gamma = shrink;
    if (degfrac > gamma) gamma = degfrac;
  }
  return gamma;
}

Hierarchy build_hierarchy(const Graph& g, const NodeWeighting& a, Len h,
                          long long s_ed, int d, std::optional<Rat> phi_override,
                          CutMode mode, const FlowOpts& flow) {
  Rat phi;
  if (phi_override) {
    phi = *phi_override;
  } else {
    // recipe: phi = 1 / (2 ceil(|A|^(1/d)) kappa), kappa = ceil(4 ln(n+2) n^(1/sqrt(s)))
    double atot = rat_double(a.total());
    long long a_pow = (long long)std::ceil(std::pow(std::max(atot, 1.0), 1.0 / d));
    double kap = 4.0 * std::log((double)g.n() + 2.0) *
                 std::pow((double)std::max(g.n(), 2), 1.0 / std::sqrt((double)s_ed));
    long long kappa = (long long)std::ceil(kap);
    phi = Rat(1) / Rat((long)(2 * std::max(a_pow, 1LL) * std::max(kappa, 1LL)));
  }
  for (int attempt = 0; attempt < 40; ++attempt) {
    Hierarchy hh = make_hierarchy(g, h, s_ed, phi, d, mode, flow);
    hierarchy_update(hh, a);
    if (hh.gamma_measured <= Rat(1, 2) && hh.levels[d].total() <= 1) return hh;
    phi /= 2;
  }
  throw ConstructionError("build_hierarchy: no phi reached gamma <= 1/2 with |A_d| <= 1");
}

namespace {

HierarchyCheck expansion_check(const Graph& host, const NodeWeighting& a, Len h,
                               long long s, const Rat& phi, const FlowOpts& flow,
                               const std::string& name) {
  HierarchyCheck c;
  c.name = name;
  if (a.total() <= 1) {
    // any a-respecting demand has value <= 1/2 and routes along shortest
    // paths with congestion <= 1/2 <= 1/(2 phi)
    c.pass = true;
    c.detail = "|A| <= 1, trivially expanding";
    return c;
  }
  long long s_prime = (long long)std::floor(std::sqrt((double)s));
  while (s_prime * s_prime > s) --s_prime;
  try {
    CutCertificate r = cut_or_certify(host, a, h, s, s_prime, phi, flow);
    if (r.certified) {
      c.pass = true;
      c.detail = "LDD demand routed with congestion " +
                 r.expansion.congestion.get_str() + " <= " +
                 r.expansion.gamma.get_str();
    } else {
      c.pass = false;
      c.detail = "sparse cut exists (phi' = " + r.phi_prime.get_str() + ")";
    }
  } catch (const Error& e) {
    c.pass = false;
    c.detail = std::string("certification failed: ") + e.what();
  }
  return c;
}

}  // namespace

HierarchyReport validate_hierarchy_exact(const Hierarchy& hh, const Graph& g) {
  HierarchyReport rep;
  rep.gamma = measure_gamma(hh);
  auto add = [&](std::string name, bool pass, std::string detail = "") {
    rep.checks.push_back({std::move(name), pass, std::move(detail)});
  };
  int d = hh.d;
  for (int i = 1; i <= d; ++i) {
    NodeWeighting degc = deg_of_cut(g, hh.cuts[i]);
    add("deg_C" + std::to_string(i) + " <= A" + std::to_string(i),
        degc.leq(hh.levels[i]));
    add("A" + std::to_string(i) + " <= A" + std::to_string(i - 1),
        hh.levels[i].leq(hh.levels[i - 1]));
  }
  add("A0 = A1 + A", hh.levels[0] == hh.levels[1].plus(hh.a));
  for (int j = 1; j < d; ++j)
    add("A" + std::to_string(j) + " = A" + std::to_string(j + 1) + " + deg_C" +
            std::to_string(j),
        hh.levels[j] == hh.levels[j + 1].plus(deg_of_cut(g, hh.cuts[j])));
  add("Ad = deg_Cd", hh.levels[d] == deg_of_cut(g, hh.cuts[d]));
  add("A0 >= A", hh.a.leq(hh.levels[0]));
  if (rep.gamma < 1) {
    add("|A0| <= |A|/(1-gamma)",
        hh.levels[0].total() * (1 - rep.gamma) <= hh.a.total(),
        "gamma = " + rep.gamma.get_str());
  }
  add("gamma <= 1/2", rep.gamma <= Rat(1, 2), "gamma = " + rep.gamma.get_str());
  long long pair_bound = (long long)g.n() * (g.n() - 1) / 2;
  for (int j = 0; j < d; ++j)
    add("nonzero-cut counter, level " + std::to_string(j),
        hh.nonzero_delta[j] <= pair_bound);

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

HierarchyReport validate_hierarchy(const Hierarchy& hh, const Graph& g) {
  HierarchyReport rep = validate_hierarchy_exact(hh, g);
  for (int i = 1; i <= hh.d; ++i)
    rep.checks.push_back(expansion_check(
        hh.with_cut_applied(i), hh.levels[i - 1], hh.h, hh.s_ed, hh.phi, hh.flow,
        "A" + std::to_string(i - 1) + " expanding in G - C" + std::to_string(i)));
  rep.checks.push_back(expansion_check(g, hh.levels[hh.d], hh.h, hh.s_ed, hh.phi,
                                       hh.flow, "Ad expanding in G"));
  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

}  // namespace ftl
