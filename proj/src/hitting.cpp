#include "ftl/hitting.hpp"

#include <algorithm>
#include <cmath>

namespace ftl {

void ConstraintSystem::validate() const {
  if (!(tau_low > 0 && tau_low <= 1))
    throw ConstructionError("constraints: tau_low must be in (0,1]");
  if (!(p_sets.empty() && q_sets.empty()) && tau_high < 1)
    throw ConstructionError("constraints: tau_high must be >= 1");
  auto w_of = [&](int e) {
    auto it = weight.find(e);
    if (it == weight.end()) return Rat(0);
    Rat w = it->second;
    w.canonicalize();
    return w;
  };
  for (const auto& [e, w] : weight)
    if (w < 0 || w > 1) throw ConstructionError("constraints: weight outside [0,1]");
  for (const auto& p : p_sets) {
    Rat s = 0;
    for (int e : p) s += w_of(e);
    if (s < tau_low) throw ConstructionError("constraints: P-set below tau_low");
  }
  for (const auto& q : q_sets) {
    Rat s = 0;
    for (int e : q) s += w_of(e);
    if (s > tau_high) throw ConstructionError("constraints: Q-set above tau_high");
  }
}

ConstraintSystem build_constraints(const Graph& g, const MovingCut& c_j,
                                   const NodeWeighting& a_j,
                                   const std::vector<const ClusterTree*>& clusters,
                                   const Rat& tau_hit, const Rat& tau_heavy) {
  ConstraintSystem cs;
  cs.tau_low = tau_hit;
  cs.tau_high = tau_heavy < 1 ? Rat(1) : tau_heavy;

  std::set<std::vector<int>> p_seen, q_seen;
  auto add_p = [&](std::vector<int> s) {
    std::sort(s.begin(), s.end());
    if (p_seen.insert(s).second) cs.p_sets.push_back(std::move(s));
  };
  auto add_q = [&](std::vector<int> s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.empty()) return;
    if (q_seen.insert(s).second) cs.q_sets.push_back(std::move(s));
  };

  // P: single edges and lex-max shortest paths with enough cut weight
  for (const Edge& e : g.edges())
    if (c_j.value(e.id) >= tau_hit) add_p({e.id});
  for (int u = 0; u < g.n(); ++u) {
    auto from_u = lexmax_shortest_paths_from(g, u);
    for (int v = u + 1; v < g.n(); ++v) {
      if (!from_u[v].reachable || from_u[v].edge_ids.empty()) continue;
      if (c_j.of_path(from_u[v].edge_ids) >= tau_hit) add_p(from_u[v].edge_ids);
    }
  }

  auto incident_ids = [&](const std::vector<int>& vs) {
    std::vector<int> ids;
    for (int v : vs)
      for (int ei : g.incident(v)) ids.push_back(g.edge(ei).id);
    return ids;
  };

  for (const ClusterTree* t : clusters) {
    // type 1: incident edges of light clusters
    if (a_j.sum_over(t->vertices) <= tau_heavy) add_q(incident_ids(t->vertices));
    // type 2: incident edges of the maximal interval after each orientation
    for (const auto& [child, pe] : t->parent) {
      int parent = pe.first;
      for (auto [from, to] : {std::pair<int, int>{parent, child}, {child, parent}}) {
        int tpos = t->tour.pos.at({from, to});
        int tend = maximal_interval(t->tour, tpos, a_j, tau_heavy);
        std::vector<int> window;
        for (int i = tpos; i < tend; ++i) window.push_back(t->tour.at(i));
        std::sort(window.begin(), window.end());
        window.erase(std::unique(window.begin(), window.end()), window.end());
        if (!window.empty()) add_q(incident_ids(window));
      }
    }
  }

  std::set<int> elems;
  for (const auto& p : cs.p_sets) elems.insert(p.begin(), p.end());
  for (const auto& q : cs.q_sets) elems.insert(q.begin(), q.end());
  cs.elements.assign(elems.begin(), elems.end());
  for (int e : cs.elements) {
    Rat w = c_j.value(e);
    if (w > 1) w = 1;
    cs.weight[e] = w;
  }
  cs.validate();
  return cs;
}

Rat exceed_probability(const std::vector<Rat>& rhos, long long already,
                       const Rat& alpha) {
  // violated iff already + sampled > alpha, i.e. sampled >= floor(alpha)+1-already
  long long threshold = rat_floor(alpha).get_si() + 1 - already;
  if (threshold <= 0) return Rat(1);
  if (threshold > (long long)rhos.size()) return Rat(0);
  // f[c] = Pr[count = c], with the top bucket saturating at `threshold`
  std::vector<Rat> f((size_t)threshold + 1, Rat(0));
  f[0] = 1;
  for (const Rat& rho : rhos) {
    std::vector<Rat> nf((size_t)threshold + 1, Rat(0));
    for (long long c = 0; c <= threshold; ++c) {
      if (f[(size_t)c] == 0) continue;
      if (c == threshold) {
        nf[(size_t)c] += f[(size_t)c];
        continue;
      }
      nf[(size_t)c] += f[(size_t)c] * (1 - rho);
      nf[(size_t)c + 1] += f[(size_t)c] * rho;
    }
    f = std::move(nf);
  }
  return f[(size_t)threshold];
}

SelectResult derandomized_select(const ConstraintSystem& cs) {
  cs.validate();
  SelectResult out;
  size_t m = cs.p_sets.size() + cs.q_sets.size();
  if (m == 0) {
    out.beta = 0;
    out.alpha = 0;
    return out;
  }
  Rat log_term = rat_upper_fixed(100.0 * std::log((double)std::max<size_t>(m, 2)));
  out.beta = log_term / cs.tau_low;
  out.alpha = 2 * out.beta * cs.tau_high;

  std::map<int, Rat> rho;
  for (int e : cs.elements) {
    Rat w = cs.weight.at(e);
    w.canonicalize();
    Rat r = w * out.beta;
    rho[e] = r > 1 ? Rat(1) : r;
  }

  std::map<int, int> fixed;  // -1 undetermined, else 0/1
  for (int e : cs.elements) fixed[e] = -1;

  auto p_prob = [&](const std::vector<int>& p) {
    Rat prod = 1;
    for (int e : p) {
      int f = fixed.at(e);
      if (f == 1) return Rat(0);
      if (f == -1) prod *= (1 - rho.at(e));
    }
    return prod;
  };
  auto q_prob = [&](const std::vector<int>& q) {
    long long already = 0;
    std::vector<Rat> und;
    for (int e : q) {
      int f = fixed.at(e);
      if (f == 1) ++already;
      else if (f == -1) und.push_back(rho.at(e));
    }
    return exceed_probability(und, already, out.alpha);
  };
  auto expect_fail = [&]() {
    Rat s = 0;
    for (const auto& p : cs.p_sets) s += p_prob(p);
    for (const auto& q : cs.q_sets) s += q_prob(q);
    return s;
  };

  if (expect_fail() > Rat(1, 2))
    throw Error("derandomized_select: initial failure expectation above 1/2");
  for (int e : cs.elements) {
    const Rat& r = rho.at(e);
    int choice;
    if (r == 1) {
      choice = 1;  // sampled with probability one; conditioning on 0 is void
    } else if (r == 0) {
      choice = 0;
    } else {
      fixed[e] = 0;
      Rat ez = expect_fail();
      fixed[e] = 1;
      Rat eo = expect_fail();
      choice = (ez <= eo) ? 0 : 1;
    }
    fixed[e] = choice;
    Rat cur = expect_fail();
    if (cur > Rat(1, 2))
      throw Error("derandomized_select: expectation rose above 1/2");
    out.expectation_trace.push_back(cur);
    if (choice == 1) out.selected.insert(e);
  }
  return out;
}

}  // namespace ftl
