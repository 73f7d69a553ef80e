#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "polstar/enclosure.hpp"
#include "polstar/expr.hpp"
#include "polstar/rational.hpp"

namespace polstar {

/// Dense polynomial with exact rational coefficients, index i = degree i.
class Polynomial {
 public:
  Polynomial() : c_(1) {}
  explicit Polynomial(std::vector<Rational> coeffs);

  /// Highest index with a nonzero coefficient (0 for the zero polynomial).
  std::size_t degree() const;
  /// Number of stored coefficients minus one (trailing zeros preserved).
  std::size_t stored_degree() const { return c_.size() - 1; }

  const Rational& coeff(std::size_t i) const;
  const std::vector<Rational>& coeffs() const { return c_; }
  bool is_zero() const;

  Rational eval(const Rational& x) const;
  Real eval(const Real& x) const;
  Enclosure eval(const Enclosure& x, mpfr_prec_t prec) const;

  Polynomial derivative() const;

  /// p(s*x + t), exact.
  Polynomial compose_linear(const Rational& s, const Rational& t) const;

  /// Coefficient-wise x -> x/d scaling: coefficient i becomes c_i / d^i.
  Polynomial stretch(const Rational& d) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& s, const Polynomial& p);
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  friend std::ostream& operator<<(std::ostream& os, const Polynomial& p);

 private:
  std::vector<Rational> c_;
};

/// Expression tree evaluating p (used to feed polynomials through the
/// function-oracle machinery).
ExprPtr polynomial_to_expr(const Polynomial& p);

/// Exact polynomial form of an expression, when it has one (rational
/// literals and x under +, -, *, division by constants, and integer powers).
std::optional<Polynomial> as_polynomial(const ExprPtr& e);

}  // namespace polstar
