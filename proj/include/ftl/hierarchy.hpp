#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ftl/flow.hpp"

namespace ftl {

// Nested length-constrained expander hierarchy state: node weightings
// A_0 .. A_d and moving cuts C_1 .. C_d on the 1/(h*s_ed) grid, maintained
// incrementally. Invariants (validated below):
//   deg_{C_i} <= A_i <= A_{i-1},  A_0 = A_1 + A,  A_j = A_{j+1} + deg_{C_j},
//   A_d = deg_{C_d}, and each A_{i-1} certified expanding in G - C_i.
struct Hierarchy {
  Graph base;
  Len h = 0;
  long long s_ed = 0;
  int d = 0;
  Rat phi;
  CutMode mode = CutMode::kPoly;
  FlowOpts flow;

  NodeWeighting a;                    // the driven weighting A
  std::vector<NodeWeighting> levels;  // A_0 .. A_d
  std::vector<MovingCut> cuts;        // index i in [1, d] is C_i
  std::vector<long long> nonzero_delta;  // per level j: nonzero Delta_C returns
  // chronological (cut, measured phi') increments per level, for diagnostics
  std::vector<std::vector<std::pair<MovingCut, Rat>>> increments_by_level;
  Rat gamma_measured;

  Graph with_cut_applied(int i) const;  // G - C_i
};

Hierarchy make_hierarchy(const Graph& g, Len h, long long s_ed, const Rat& phi,
                         int d, CutMode mode = CutMode::kPoly,
                         const FlowOpts& flow = {});

// incremental update A <- a_new (requires a_new >= A pointwise); restores all
// invariants via the recursive cut-until-certify structure
void hierarchy_update(Hierarchy& state, const NodeWeighting& a_new);

// one-shot build: single update from zero. phi defaults to the recipe value
// 1 / (2 ceil(|A|^(1/d)) kappa) and is halved until the measured shrink gamma
// is at most 1/2 and |A_d| <= 1.
Hierarchy build_hierarchy(const Graph& g, const NodeWeighting& a, Len h,
                          long long s_ed, int d,
                          std::optional<Rat> phi_override = std::nullopt,
                          CutMode mode = CutMode::kPoly, const FlowOpts& flow = {});

// max over levels of |A_{j+1}|/|A_j| and 2|deg_{C_{j+1}}|/|A_j|
Rat measure_gamma(const Hierarchy& h);

struct HierarchyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct HierarchyReport {
  bool pass = false;
  std::vector<HierarchyCheck> checks;
  Rat gamma;
};

// Exact nestedness/bookkeeping/counter checks only (no LP work).
HierarchyReport validate_hierarchy_exact(const Hierarchy& hier, const Graph& g);

// Exact checks plus per-level expansion certification by routing a fresh LDD
// demand within the congestion/length budget.
HierarchyReport validate_hierarchy(const Hierarchy& hier, const Graph& g);

}  // namespace ftl
