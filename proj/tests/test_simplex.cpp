#include "ftl/simplex.hpp"

#include "doctest.h"

using namespace ftl;

TEST_CASE("simplex: basic optimum and duals") {
  // min -x - y  s.t.  x + y <= 1
  LpProblem p;
  p.num_vars = 2;
  p.obj = {Rat(-1), Rat(-1)};
  p.add_row({Rat(1), Rat(1)}, LpRel::kLe, Rat(1));
  LpResult r = lp_solve(p);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.objective == -1);
  CHECK(r.x[0] + r.x[1] == 1);
  CHECK(r.duals[0] == -1);  // reduced cost of x: -1 - pi*1 >= 0 at optimum
}

TEST_CASE("simplex: equality constraints") {
  // min x  s.t.  x + y = 1
  LpProblem p;
  p.num_vars = 2;
  p.obj = {Rat(1), Rat(0)};
  p.add_row({Rat(1), Rat(1)}, LpRel::kEq, Rat(1));
  LpResult r = lp_solve(p);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.objective == 0);
  CHECK(r.x[1] == 1);
}

TEST_CASE("simplex: infeasible") {
  // x <= -1 with x >= 0
  LpProblem p;
  p.num_vars = 1;
  p.obj = {Rat(1)};
  p.add_row({Rat(1)}, LpRel::kLe, Rat(-1));
  CHECK(lp_solve(p).status == LpStatus::kInfeasible);
}

TEST_CASE("simplex: unbounded") {
  // min -x  s.t.  y <= 1
  LpProblem p;
  p.num_vars = 2;
  p.obj = {Rat(-1), Rat(0)};
  p.add_row({Rat(0), Rat(1)}, LpRel::kLe, Rat(1));
  CHECK(lp_solve(p).status == LpStatus::kUnbounded);
}

TEST_CASE("simplex: exact rationals, degenerate rows") {
  // min x1 + x2  s.t.  2x1 + x2 >= 3/2, x1 + 3x2 >= 1, x1 <= 10 (slack row)
  LpProblem p;
  p.num_vars = 2;
  p.obj = {Rat(1), Rat(1)};
  p.add_row({Rat(2), Rat(1)}, LpRel::kGe, Rat(3, 2));
  p.add_row({Rat(1), Rat(3)}, LpRel::kGe, Rat(1));
  p.add_row({Rat(1), Rat(0)}, LpRel::kLe, Rat(10));
  LpResult r = lp_solve(p);
  REQUIRE(r.status == LpStatus::kOptimal);
  // vertex of the first two constraints: x1 = 7/10, x2 = 1/10
  CHECK(r.x[0] == Rat(7, 10));
  CHECK(r.x[1] == Rat(1, 10));
  CHECK(r.objective == Rat(4, 5));
  // duals satisfy c - A^T pi = 0 on the active columns
  CHECK(2 * r.duals[0] + r.duals[1] == 1);
  CHECK(r.duals[0] + 3 * r.duals[1] == 1);
}

TEST_CASE("simplex: redundant equality rows survive") {
  // x + y = 1 stated twice
  LpProblem p;
  p.num_vars = 2;
  p.obj = {Rat(1), Rat(2)};
  p.add_row({Rat(1), Rat(1)}, LpRel::kEq, Rat(1));
  p.add_row({Rat(1), Rat(1)}, LpRel::kEq, Rat(1));
  LpResult r = lp_solve(p);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.objective == 1);
  CHECK(r.x[0] == 1);
}
