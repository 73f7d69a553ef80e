#pragma once

#include <mpfr.h>

#include <algorithm>
#include <iosfwd>
#include <string>

#include "polstar/rational.hpp"

namespace polstar {

/// Minimum working precision carried by any Real.
inline constexpr mpfr_prec_t kMinPrecision = 64;

/// Arbitrary-precision floating value tagged with its working precision.
/// Binary operations produce results at the minimum precision of the
/// operands, rounded to nearest unless stated otherwise.
class Real {
 public:
  explicit Real(mpfr_prec_t prec = kMinPrecision) {
    mpfr_init2(f_, clamp(prec));
    mpfr_set_zero(f_, 1);
  }
  Real(long v, mpfr_prec_t prec) {
    mpfr_init2(f_, clamp(prec));
    mpfr_set_si(f_, v, MPFR_RNDN);
  }
  Real(double v, mpfr_prec_t prec) {
    mpfr_init2(f_, clamp(prec));
    mpfr_set_d(f_, v, MPFR_RNDN);
  }
  Real(const Rational& v, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN) {
    mpfr_init2(f_, clamp(prec));
    mpfr_set_q(f_, v.raw(), rnd);
  }
  Real(const Real& o) {
    mpfr_init2(f_, mpfr_get_prec(o.f_));
    mpfr_set(f_, o.f_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(f_, kMinPrecision);
    mpfr_swap(f_, o.f_);
  }
  ~Real() { mpfr_clear(f_); }

  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(f_, mpfr_get_prec(o.f_));
      mpfr_set(f_, o.f_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(f_, o.f_);
    return *this;
  }

  mpfr_prec_t prec() const { return mpfr_get_prec(f_); }

  /// Same value rounded into a (possibly different) precision.
  Real round_to(mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN) const {
    Real r(prec);
    mpfr_set(r.f_, f_, rnd);
    return r;
  }

  int sign() const { return mpfr_sgn(f_); }
  bool is_zero() const { return mpfr_zero_p(f_) != 0; }
  bool is_finite() const { return mpfr_number_p(f_) != 0; }
  Real abs() const {
    Real r(prec());
    mpfr_abs(r.f_, f_, MPFR_RNDN);
    return r;
  }

  /// Exact scaling by 2^k.
  Real mul_2exp(long k) const {
    Real r(prec());
    mpfr_mul_2si(r.f_, f_, k, MPFR_RNDN);
    return r;
  }

  /// Exact conversion; requires a finite value.
  Rational to_rational() const;

  double to_double() const { return mpfr_get_d(f_, MPFR_RNDN); }

  /// log2 of the value as a double (for ratio reporting only).
  double log2_approx() const;

  /// Decimal string; digits == 0 picks the round-trip count for this
  /// precision.
  std::string str(std::size_t digits = 0) const;

  friend Real operator+(const Real& a, const Real& b) { return binop(a, b, mpfr_add); }
  friend Real operator-(const Real& a, const Real& b) { return binop(a, b, mpfr_sub); }
  friend Real operator*(const Real& a, const Real& b) { return binop(a, b, mpfr_mul); }
  friend Real operator/(const Real& a, const Real& b) { return binop(a, b, mpfr_div); }
  friend Real operator-(const Real& a) {
    Real r(a.prec());
    mpfr_neg(r.f_, a.f_, MPFR_RNDN);
    return r;
  }

  int cmp(const Real& o) const { return mpfr_cmp(f_, o.f_); }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.f_, b.f_) == 0; }
  friend bool operator!=(const Real& a, const Real& b) { return mpfr_cmp(a.f_, b.f_) != 0; }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.f_, b.f_) < 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.f_, b.f_) <= 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.f_, b.f_) > 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.f_, b.f_) >= 0; }

  static const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }
  static const Real& min(const Real& a, const Real& b) { return a < b ? a : b; }

  friend std::ostream& operator<<(std::ostream& os, const Real& v);

  mpfr_srcptr raw() const { return f_; }
  mpfr_ptr raw() { return f_; }

  static mpfr_prec_t clamp(mpfr_prec_t p) { return std::max<mpfr_prec_t>(p, kMinPrecision); }

 private:
  using MpfrBinop = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
  static Real binop(const Real& a, const Real& b, MpfrBinop fn) {
    Real r(std::min(a.prec(), b.prec()));
    fn(r.f_, a.f_, b.f_, MPFR_RNDN);
    return r;
  }

  mpfr_t f_;
};

}  // namespace polstar
