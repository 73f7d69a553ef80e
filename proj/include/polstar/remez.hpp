#pragma once

#include <utility>
#include <vector>

#include "polstar/polynomial.hpp"
#include "polstar/supnorm.hpp"

namespace polstar {

struct RemezOptions {
  long tol_bits = 40;       // relative equioscillation tolerance 2^-tol_bits
  int max_iterations = 60;
  mpfr_prec_t prec = 128;   // working/sample precision floor
};

struct MinimaxResult {
  Polynomial p;       // coefficients of the final exchange solve (exact rationals)
  Enclosure epsilon;  // certified ||f - p|| over [0, a]
  std::vector<std::pair<Rational, Real>> alternation;  // n+2 points, alternating signs
  std::vector<Rational> levelled_errors;               // |E| per exchange iteration
  int iterations = 0;
};

/// Remez exchange for the degree <= n minimax approximation of f on [0, a].
/// References start at the mapped Chebyshev extrema; each linear system is
/// solved in exact rational arithmetic over midpoint-rationalized samples.
MinimaxResult minimax(const FunctionOracle& f, const Rational& a, unsigned n,
                      const RemezOptions& opts = {});

}  // namespace polstar
