#pragma once

#include <set>
#include <vector>

#include "ftl/cover.hpp"
#include "ftl/graph.hpp"

namespace ftl {

// Hitting-set instance: select S so that every P-set is hit and every Q-set
// contains at most alpha = 2 * beta * tau_high selected elements.
struct ConstraintSystem {
  std::vector<int> elements;             // edge ids appearing in constraints, ascending
  std::map<int, Rat> weight;             // w(e) in [0,1]
  std::vector<std::vector<int>> p_sets;  // w(P) >= tau_low each
  std::vector<std::vector<int>> q_sets;  // w(Q) <= tau_high each
  Rat tau_low;                           // in (0, 1]
  Rat tau_high;                          // >= 1

  void validate() const;  // throws ConstructionError on violated bounds
};

// The sampled-edge constraint system for level j: P holds single edges and
// lex-max shortest paths with C_j-weight at least tau_hit; Q holds incident
// edge sets of light clusters and of every maximal tour interval at threshold
// tau_heavy under A_j. Weights are C_j clamped to [0,1].
ConstraintSystem build_constraints(const Graph& g, const MovingCut& c_j,
                                   const NodeWeighting& a_j,
                                   const std::vector<const ClusterTree*>& clusters,
                                   const Rat& tau_hit, const Rat& tau_heavy);

struct SelectResult {
  std::set<int> selected;
  Rat beta;
  Rat alpha;
  std::vector<Rat> expectation_trace;  // E[X_fail | prefix] after each fixing
};

// Conditional-expectation derandomization: fixes membership in ascending
// edge-id order keeping the exact expected number of violated constraints at
// most 1/2.
SelectResult derandomized_select(const ConstraintSystem& cs);

// exact Pr[ already + Binomial(rhos) > alpha ], the DP behind the selection
Rat exceed_probability(const std::vector<Rat>& rhos, long long already,
                       const Rat& alpha);

}  // namespace ftl
