#include "ftl/simplex.hpp"

namespace ftl {

int LpProblem::add_row(std::vector<Rat> coeffs, LpRel r, Rat b) {
  if ((int)coeffs.size() != num_vars) throw Error("lp: row width mismatch");
  rows.push_back(std::move(coeffs));
  rel.push_back(r);
  rhs.push_back(std::move(b));
  return (int)rows.size() - 1;
}

namespace {

struct Tableau {
  // columns: [structural | slack/surplus | artificial]
  int m = 0, total_cols = 0;
  int art_begin = 0;
  std::vector<std::vector<Rat>> a;
  std::vector<Rat> b;
  std::vector<Rat> red;  // reduced cost row for the active phase
  std::vector<int> basis;

  void set_costs(const std::vector<Rat>& cost) {
    red = cost;
    for (int i = 0; i < m; ++i) {
      const Rat& cb = cost[basis[i]];
      if (cb == 0) continue;
      for (int j = 0; j < total_cols; ++j)
        if (a[i][j] != 0) red[j] -= cb * a[i][j];
    }
  }

  void pivot(int row, int col) {
    Rat piv = a[row][col];
    if (piv != 1) {
      for (int j = 0; j < total_cols; ++j)
        if (a[row][j] != 0) a[row][j] /= piv;
      b[row] /= piv;
    }
    for (int i = 0; i < m; ++i) {
      if (i == row || a[i][col] == 0) continue;
      Rat f = a[i][col];
      for (int j = 0; j < total_cols; ++j)
        if (a[row][j] != 0) a[i][j] -= f * a[row][j];
      b[i] -= f * b[row];
      a[i][col] = 0;
    }
    if (!red.empty() && red[col] != 0) {
      Rat f = red[col];
      for (int j = 0; j < total_cols; ++j)
        if (a[row][j] != 0) red[j] -= f * a[row][j];
      red[col] = 0;
    }
    basis[row] = col;
  }

  // Bland's rule; returns false on unbounded
  bool optimize(int ncols, long long& pivots_left) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j)
        if (red[j] < 0) { enter = j; break; }
      if (enter < 0) return true;
      int leave = -1;
      Rat best_ratio;
      for (int i = 0; i < m; ++i) {
        if (a[i][enter] > 0) {
          Rat ratio = b[i] / a[i][enter];
          if (leave < 0 || ratio < best_ratio ||
              (ratio == best_ratio && basis[i] < basis[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return false;
      if (--pivots_left <= 0) throw ResourceError("lp: pivot limit exceeded");
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult lp_solve(const LpProblem& p, long long pivot_limit) {
  int m = (int)p.rows.size();
  int n = p.num_vars;
  int extra = 0;
  for (LpRel r : p.rel)
    if (r != LpRel::kEq) ++extra;

  Tableau t;
  t.m = m;
  t.art_begin = n + extra;
  t.total_cols = n + extra + m;
  t.a.assign(m, std::vector<Rat>(t.total_cols, 0));
  t.b.resize(m);
  t.basis.resize(m);

  int next_extra = n;
  for (int i = 0; i < m; ++i) {
    bool flip = p.rhs[i] < 0;
    for (int j = 0; j < n; ++j)
      if (p.rows[i][j] != 0) t.a[i][j] = flip ? Rat(-p.rows[i][j]) : p.rows[i][j];
    t.b[i] = flip ? Rat(-p.rhs[i]) : p.rhs[i];
    LpRel r = p.rel[i];
    if (flip) {
      if (r == LpRel::kLe) r = LpRel::kGe;
      else if (r == LpRel::kGe) r = LpRel::kLe;
    }
    if (p.rel[i] != LpRel::kEq) {
      t.a[i][next_extra] = (r == LpRel::kLe) ? 1 : -1;
      ++next_extra;
    }
    t.a[i][t.art_begin + i] = 1;
    t.basis[i] = t.art_begin + i;
  }

  long long pivots_left = pivot_limit;
  LpResult res;

  // phase 1
  std::vector<Rat> cost1(t.total_cols, 0);
  for (int i = 0; i < m; ++i) cost1[t.art_begin + i] = 1;
  t.set_costs(cost1);
  if (!t.optimize(t.total_cols, pivots_left))
    throw Error("lp: phase-1 unbounded");
  Rat phase1 = 0;
  for (int i = 0; i < m; ++i)
    if (t.basis[i] >= t.art_begin) phase1 += t.b[i];
  if (phase1 > 0) {
    res.status = LpStatus::kInfeasible;
    return res;
  }
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < t.art_begin) continue;
    for (int j = 0; j < t.art_begin; ++j)
      if (t.a[i][j] != 0) { t.pivot(i, j); break; }
    // remaining case: redundant row, artificial stays basic at zero
  }

  // phase 2; artificial columns are locked out of the basis
  std::vector<Rat> cost2(t.total_cols, 0);
  for (int j = 0; j < n; ++j) cost2[j] = p.obj[j];
  t.set_costs(cost2);
  if (!t.optimize(t.art_begin, pivots_left)) {
    res.status = LpStatus::kUnbounded;
    return res;
  }

  res.status = LpStatus::kOptimal;
  res.x.assign(n, 0);
  for (int i = 0; i < m; ++i)
    if (t.basis[i] < n) res.x[t.basis[i]] = t.b[i];
  res.objective = 0;
  for (int j = 0; j < n; ++j)
    if (res.x[j] != 0) res.objective += p.obj[j] * res.x[j];
  // Duals read off the artificial unit columns: their phase-2 reduced cost is
  // 0 - pi_i for the normalized (rhs >= 0) row.
  res.duals.assign(m, 0);
  for (int i = 0; i < m; ++i) {
    Rat pi = -t.red[t.art_begin + i];
    res.duals[i] = (p.rhs[i] < 0) ? Rat(-pi) : pi;
  }
  return res;
}

}  // namespace ftl
