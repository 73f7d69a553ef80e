#include "polstar/rounding.hpp"

namespace polstar {

namespace {

/// Nearest integer to an exact rational, ties to even.
Int round_nearest_even(const Rational& t) {
  Int k = t.floor();
  Rational frac = t - Rational(k);
  Rational half(1, 2);
  if (frac > half) return k + 1;
  if (frac < half) return k;
  return k.is_even() ? k : k + 1;
}

}  // namespace

Rational round_to_multiple(const Rational& x, long m) {
  Int k = round_nearest_even(x.mul_2exp(m));
  return Rational::dyadic(k, -m);
}

Rational round_to_multiple(const Real& x, long m) {
  if (!x.is_finite()) throw DomainError("round_to_multiple of non-finite value");
  // mul_2exp is exact on mpfr values, and mpfr_get_z with RNDN rounds to the
  // nearest integer with ties to even.
  Real t = x.mul_2exp(m);
  Int k;
  mpfr_get_z(k.raw(), t.raw(), MPFR_RNDN);
  return Rational::dyadic(k, -m);
}

Int floor_scaled(const Rational& x, long m) { return x.mul_2exp(m).floor(); }

Int ceil_scaled(const Rational& x, long m) { return x.mul_2exp(m).ceil(); }

Int floor_scaled(const Enclosure& x, long m) {
  if (!x.hi().is_finite()) throw DomainError("floor_scaled of non-finite enclosure");
  return floor_scaled(x.hi().to_rational(), m);
}

Int ceil_scaled(const Enclosure& x, long m) {
  if (!x.lo().is_finite()) throw DomainError("ceil_scaled of non-finite enclosure");
  return ceil_scaled(x.lo().to_rational(), m);
}

}  // namespace polstar
