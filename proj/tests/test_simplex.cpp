#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polstar/simplex.hpp"

using namespace polstar;

namespace {

LinearProgram lp2(std::vector<std::vector<long>> A, std::vector<long> b, std::vector<long> c) {
  LinearProgram lp;
  for (auto& row : A) {
    std::vector<Rational> r(row.begin(), row.end());
    lp.A.push_back(std::move(r));
  }
  lp.b.assign(b.begin(), b.end());
  lp.c.assign(c.begin(), c.end());
  return lp;
}

}  // namespace

TEST_CASE("small LP solves to the exact vertex") {
  // max x + y st x + 2y <= 4, 3x + y <= 6
  LpSolution s = solve_lp(lp2({{1, 2}, {3, 1}}, {4, 6}, {1, 1}));
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == Rational(14, 5));
  CHECK(s.x[0] == Rational(8, 5));
  CHECK(s.x[1] == Rational(6, 5));
}

TEST_CASE("negative right-hand sides route through phase 1") {
  // x >= 2 encoded as -x <= -2, maximize -x: optimum at x = 2
  LpSolution s = solve_lp(lp2({{-1}, {1}}, {-2, 5}, {-1}));
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.x[0] == Rational(2));
  CHECK(s.objective == Rational(-2));
}

TEST_CASE("infeasible systems are detected") {
  // x <= 1 and x >= 3
  LpSolution s = solve_lp(lp2({{1}, {-1}}, {1, -3}, {1}));
  CHECK(s.status == LpStatus::Infeasible);
}

TEST_CASE("unbounded directions are detected") {
  LpSolution s = solve_lp(lp2({{-1}}, {1}, {1}));
  CHECK(s.status == LpStatus::Unbounded);
}

TEST_CASE("Bland's rule terminates on the classic cycling instance") {
  LinearProgram lp;
  lp.A = {{Rational(1, 4), Rational(-60), Rational(-1, 25), Rational(9)},
          {Rational(1, 2), Rational(-90), Rational(-1, 50), Rational(3)},
          {Rational(0), Rational(0), Rational(1), Rational(0)}};
  lp.b = {Rational(0), Rational(0), Rational(1)};
  lp.c = {Rational(3, 4), Rational(-150), Rational(1, 50), Rational(-6)};
  LpSolution s = solve_lp(lp);
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.objective == Rational(1, 20));
}

TEST_CASE("equality-like paired rows pin a coordinate") {
  // 2x + y == 3 via both inequalities, maximize y with y <= 4
  LpSolution s = solve_lp(lp2({{2, 1}, {-2, -1}, {0, 1}}, {3, -3, 4}, {0, 1}));
  REQUIRE(s.status == LpStatus::Optimal);
  CHECK(s.x[1] == Rational(3));
  CHECK(s.x[0] == Rational(0));
}
