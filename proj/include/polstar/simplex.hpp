#pragma once

#include <vector>

#include "polstar/rational.hpp"

namespace polstar {

/// maximize c.x subject to A x <= b, x >= 0
struct LinearProgram {
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  std::vector<Rational> c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rational objective;
  std::vector<Rational> x;
};

/// Two-phase primal simplex in exact rational arithmetic with Bland's rule
/// (no cycling). Sized for the small polytopes of the coefficient search.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace polstar
