#pragma once

#include <vector>

#include "polstar/enclosure.hpp"
#include "polstar/expr.hpp"
#include "polstar/integer.hpp"
#include "polstar/polynomial.hpp"

namespace polstar {

/// Fractional-bit budget m_0..m_n: the degree-i coefficient is a multiple of
/// 2^-m_i.
struct BitBudget {
  std::vector<long> bits;

  std::size_t size() const { return bits.size(); }
  long operator[](std::size_t i) const { return bits[i]; }
};

/// Per-degree integer intervals for the scaled coefficients c_i = 2^{m_i} p_i.
struct CandidateBox {
  std::vector<Int> lo, hi;
  BitBudget bits;

  static CandidateBox empty_box(const BitBudget& bits);

  bool empty() const;
  std::vector<Int> counts() const;  // hi - lo + 1, clamped at zero
  Int total() const;
  bool contains(const std::vector<Int>& tuple) const;

  /// The rational coefficient value c / 2^{m_i}.
  Rational coeff_value(std::size_t i, const Int& c) const {
    return Rational::dyadic(c, -bits[i]);
  }
};

/// Two-sided band lower <= sum_i coeff_i * c_i <= upper over the scaled
/// integers, outward-rounded so the encoded polytope contains the true one.
struct ConstraintRow {
  std::vector<Rational> coeff;
  Rational lower, upper;
};

struct ConstraintSet {
  std::vector<ConstraintRow> rows;
  std::vector<Rational> sample_points;
  Rational A;
  long d = 0;
  Rational lambda;
  Enclosure epsilon_hat;

  bool empty() const { return rows.empty(); }
};

/// Coefficient-wise nearest-grid rounding of p (the hat-polynomial).
Polynomial naive_round(const Polynomial& p, const BitBudget& bits);

/// Largest dyadic multiple of 2^-k at or below x, with k chosen so the
/// relative gap stays under 2^-rel_bits (k = rel_bits exactly for x >= 1).
Rational dyadic_below(const Rational& x, long rel_bits = 20);
Rational dyadic_below(const Enclosure& x, long rel_bits = 20);

/// The coefficient bounds derived from the scaled-Chebyshev norm bound:
/// ceil(2^{m_i}(p_i - (eps + lambda*eps_hat)|beta_i|)) <= c_i <=
/// floor(2^{m_i}(p_i + (eps + lambda*eps_hat)|beta_i|)).
CandidateBox chebyshev_box(const Polynomial& p, const Enclosure& epsilon,
                           const Enclosure& epsilon_hat, const Rational& lambda,
                           const Rational& a, const BitBudget& bits);

/// Band constraints f(x_j) +- lambda*eps_hat at x_j = (j/d) A, j = 0..d.
ConstraintSet sampled_constraints(const FunctionOracle& f, const Rational& a, long d,
                                  const Rational& lambda, const Enclosure& epsilon_hat,
                                  const BitBudget& bits, mpfr_prec_t prec = 192);

/// Optional debug output of lp_tighten: the optimizing vertex per bound.
struct TightenDebug {
  std::vector<std::vector<Rational>> min_vertex, max_vertex;  // per degree
};

/// Per-coordinate exact-rational LP bounding of the polytope; never removes
/// an integer point of the encoded polytope. Returns an empty box when the
/// polytope is infeasible.
CandidateBox lp_tighten(const CandidateBox& box, const ConstraintSet& cs,
                        TightenDebug* debug = nullptr);

}  // namespace polstar
