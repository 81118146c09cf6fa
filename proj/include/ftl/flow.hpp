#pragma once

#include <utility>
#include <vector>

#include "ftl/cover.hpp"
#include "ftl/graph.hpp"

namespace ftl {

struct FlowOpts {
  long long path_cap = 200000;
  long long pivot_limit = 2'000'000;
};

struct FlowPath {
  int u = 0, v = 0;
  std::vector<int> edge_ids;
  Rat value;
};

struct RoutingResult {
  bool feasible = false;
  Rat congestion;  // max per-edge congestion of the returned flow
  std::vector<FlowPath> flow;
  Len max_length_used = 0;
};

// Minimum-congestion routing of d over simple paths of length <= h
// (path-based LP with column generation; exact rationals).
RoutingResult route_lp(const Graph& g, const Demand& d, Len h,
                       const FlowOpts& opts = {});

// Same contract relaxed: returns any routing with congestion <= budget if one
// exists (greedy witness first, exact LP as fallback), else the exact
// minimum-congestion routing.
RoutingResult route_within_budget(const Graph& g, const Demand& d, Len h,
                                  const Rat& budget, const FlowOpts& opts = {});

// mixing demand of Appendix-A form, scaled by the cover width
Demand ldd_demand(const NodeWeighting& a, const NeighborhoodCover& cover);

struct ExpansionCertificate {
  int omega = 0;       // width of the certify cover
  Rat gamma;           // congestion budget 1/(4*omega*phi)
  Rat congestion;      // achieved congestion of the witness routing
  Len length_bound = 0;
  Rat demand_total;
};

struct CutCertificate {
  bool certified = false;
  ExpansionCertificate expansion;  // set when certified
  MovingCut cut;                   // set when not certified; nonzero, on the 1/(hs) grid
  Demand witness;                  // A-respecting, (h*s')-length
  Rat phi_prime;                   // measured spars_{hs}(cut, witness)
};

// Either certifies that a is (h,s)-length phi-expanding in g (by routing the
// LDD demand of a fresh cover within the congestion/length budget) or
// returns a sparse moving cut together with a separated witness demand.
CutCertificate cut_or_certify(const Graph& g, const NodeWeighting& a, Len h,
                              long long s, long long s_prime, const Rat& phi,
                              const FlowOpts& opts = {});

enum class CutMode { kPoly, kExist };

struct CutUntilCertifyResult {
  MovingCut cut;  // accumulated increment, on the 1/(hs) grid
  std::vector<std::pair<MovingCut, Rat>> increments;  // (cut, phi') per round
  ExpansionCertificate final_certificate;
  int nonzero_rounds = 0;
};

CutUntilCertifyResult cut_until_certify(const Graph& g, const NodeWeighting& a,
                                        Len h, long long s, const Rat& phi,
                                        CutMode mode, const FlowOpts& opts = {});

struct UnionCutReport {
  std::vector<Rat> cut_sizes;
  std::vector<Rat> phis;
  std::vector<double> potentials;  // P_0 .. P_k
  Rat sum_size_over_phi;
  double a_total_ln_n = 0;
  bool monotone = false;  // distances nondecreasing step to step (exact)
};

UnionCutReport union_cut_diagnostic(
    const Graph& g0, const NodeWeighting& a,
    const std::vector<std::pair<MovingCut, Rat>>& cuts, Len h, long long s);

}  // namespace ftl
