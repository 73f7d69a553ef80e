#pragma once

#include "polstar/polynomial.hpp"
#include "polstar/rational.hpp"

namespace polstar {

/// T_n via the integer recurrence T_n = 2x T_{n-1} - T_{n-2}.
Polynomial chebyshev_t(unsigned n);

/// T_n*(x) = T_n(2x - 1); all coefficients are nonzero integers.
Polynomial chebyshev_t_star(unsigned n);

/// Coefficients of T_n*(x/a). 1/|betas[k]| is the smallest sup norm on
/// [0, a] among degree <= n polynomials with degree-k coefficient 1.
struct BetaVector {
  Rational a;
  unsigned n = 0;
  std::vector<Rational> betas;
};

BetaVector beta_vector(unsigned n, const Rational& a);

/// The monic degree-n polynomial with the smallest sup norm on [a, b]
/// (test-suite norm oracle).
Polynomial min_norm_monic(unsigned n, const Rational& a, const Rational& b);

}  // namespace polstar
