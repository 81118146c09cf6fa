#pragma once

#include <vector>

#include "ftl/rat.hpp"

namespace ftl {

enum class LpRel { kLe, kEq, kGe };

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

// minimize obj . x  subject to  rows[i] . x (rel_i) rhs[i],  x >= 0
struct LpProblem {
  int num_vars = 0;
  std::vector<Rat> obj;
  std::vector<std::vector<Rat>> rows;  // dense coefficient rows
  std::vector<Rat> rhs;
  std::vector<LpRel> rel;

  int add_row(std::vector<Rat> coeffs, LpRel r, Rat b);
};

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Rat objective;
  std::vector<Rat> x;
  // one multiplier per input row (sign convention: reduced cost of a column
  // a with cost c is c - duals . a)
  std::vector<Rat> duals;
};

// Exact two-phase tableau simplex, Bland's rule. Intended for the small
// systems produced by the routing and cut LPs.
LpResult lp_solve(const LpProblem& p, long long pivot_limit = 2'000'000);

}  // namespace ftl
