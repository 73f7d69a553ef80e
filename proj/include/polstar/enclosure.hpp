#pragma once

#include <mpfr.h>

#include <iosfwd>

#include "polstar/errors.hpp"
#include "polstar/rational.hpp"
#include "polstar/real.hpp"

namespace polstar {

/// Certified interval [lo, hi] containing an exact real quantity.
/// All arithmetic rounds lo down and hi up, so containment is preserved.
class Enclosure {
 public:
  Enclosure() : lo_(), hi_() {}
  Enclosure(Real lo, Real hi);

  /// Point enclosure of an exact rational (outward-rounded at prec).
  Enclosure(const Rational& v, mpfr_prec_t prec)
      : lo_(v, prec, MPFR_RNDD), hi_(v, prec, MPFR_RNDU) {}

  /// Enclosure of the rational interval [a, b].
  Enclosure(const Rational& a, const Rational& b, mpfr_prec_t prec)
      : lo_(a, prec, MPFR_RNDD), hi_(b, prec, MPFR_RNDU) {}

  static Enclosure exact(const Real& v) { return Enclosure(v, v); }
  static Enclosure zero(mpfr_prec_t prec) { return Enclosure(Real(0L, prec), Real(0L, prec)); }

  const Real& lo() const { return lo_; }
  const Real& hi() const { return hi_; }
  mpfr_prec_t prec() const { return std::min(lo_.prec(), hi_.prec()); }

  Real mid() const;
  Real width() const;                      // hi - lo, rounded up
  Real mag() const;                        // max(|lo|, |hi|): upper bound of |value|
  Real mig() const;                        // lower bound of |value| (0 if sign uncertain)
  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  bool contains(const Rational& v) const;
  bool is_point() const { return lo_ == hi_; }

  /// Certified sign: +1, -1, or 0 when zero/undecided.
  int sign() const {
    if (lo_.sign() > 0) return 1;
    if (hi_.sign() < 0) return -1;
    return 0;
  }

  /// Enclosure of |value|.
  Enclosure abs_enclosure() const;

  friend Enclosure operator+(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator-(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator-(const Enclosure& a);
  friend Enclosure operator*(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator/(const Enclosure& a, const Enclosure& b);  // throws DomainError on 0 in b

  Enclosure mul_2exp(long k) const { return Enclosure(lo_.mul_2exp(k), hi_.mul_2exp(k)); }

  /// value^k, dependency-aware (tight for even powers across zero).
  Enclosure pow_int(long k) const;

  /// Smallest interval containing both (used when merging candidate ranges).
  Enclosure hull(const Enclosure& o) const;

  /// True when the two enclosures share at least one point.
  bool overlaps(const Enclosure& o) const { return !(hi_ < o.lo_ || o.hi_ < lo_); }

  friend std::ostream& operator<<(std::ostream& os, const Enclosure& v);

 private:
  Real lo_, hi_;
};

/// Elementary functions as interval extensions. Monotone functions use
/// directed endpoint evaluation; sin/cos fall back to a midpoint-plus-radius
/// bound when the monotonicity branch cannot be certified.
Enclosure enc_exp(const Enclosure& x);
Enclosure enc_ln(const Enclosure& x);    // requires lo > 0
Enclosure enc_sqrt(const Enclosure& x);  // requires lo >= 0
Enclosure enc_sin(const Enclosure& x);
Enclosure enc_cos(const Enclosure& x);
Enclosure enc_tan(const Enclosure& x);  // throws DomainError when a pole may lie inside
Enclosure enc_atan(const Enclosure& x);
Enclosure enc_sinh(const Enclosure& x);
Enclosure enc_cosh(const Enclosure& x);
Enclosure enc_pi(mpfr_prec_t prec);
Enclosure enc_e(mpfr_prec_t prec);

}  // namespace polstar
