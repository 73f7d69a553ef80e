#include "polstar/enclosure.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>

namespace polstar {

namespace {

Real directed_unary(const Real& x, mpfr_prec_t prec, mpfr_rnd_t rnd,
                    int (*fn)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)) {
  Real r(prec);
  fn(r.raw(), x.raw(), rnd);
  return r;
}

/// [fn(lo) down, fn(hi) up] for a nondecreasing fn.
Enclosure increasing(const Enclosure& x, int (*fn)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)) {
  mpfr_prec_t p = x.prec();
  return Enclosure(directed_unary(x.lo(), p, MPFR_RNDD, fn), directed_unary(x.hi(), p, MPFR_RNDU, fn));
}

}  // namespace

Enclosure::Enclosure(Real lo, Real hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  assert(!(lo_ > hi_) && "Enclosure: lo must not exceed hi");
}

Real Enclosure::mid() const {
  mpfr_prec_t p = prec();
  Real r(p);
  mpfr_add(r.raw(), lo_.raw(), hi_.raw(), MPFR_RNDN);
  mpfr_div_2si(r.raw(), r.raw(), 1, MPFR_RNDN);
  return r;
}

Real Enclosure::width() const {
  Real r(prec());
  mpfr_sub(r.raw(), hi_.raw(), lo_.raw(), MPFR_RNDU);
  return r;
}

Real Enclosure::mag() const { return Real::max(lo_.abs(), hi_.abs()); }

Real Enclosure::mig() const {
  if (lo_.sign() > 0) return lo_;
  if (hi_.sign() < 0) return -hi_;
  return Real(0L, prec());
}

bool Enclosure::contains(const Rational& v) const {
  return mpfr_cmp_q(lo_.raw(), v.raw()) <= 0 && mpfr_cmp_q(hi_.raw(), v.raw()) >= 0;
}

Enclosure Enclosure::abs_enclosure() const {
  if (lo_.sign() >= 0) return *this;
  if (hi_.sign() <= 0) return Enclosure(-hi_, -lo_);
  return Enclosure(Real(0L, prec()), mag());
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) {
  mpfr_prec_t p = std::min(a.prec(), b.prec());
  Real lo(p), hi(p);
  mpfr_add(lo.raw(), a.lo_.raw(), b.lo_.raw(), MPFR_RNDD);
  mpfr_add(hi.raw(), a.hi_.raw(), b.hi_.raw(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure operator-(const Enclosure& a, const Enclosure& b) {
  mpfr_prec_t p = std::min(a.prec(), b.prec());
  Real lo(p), hi(p);
  mpfr_sub(lo.raw(), a.lo_.raw(), b.hi_.raw(), MPFR_RNDD);
  mpfr_sub(hi.raw(), a.hi_.raw(), b.lo_.raw(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure operator-(const Enclosure& a) { return Enclosure(-a.hi_, -a.lo_); }

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  mpfr_prec_t p = std::min(a.prec(), b.prec());
  const Real* as[2] = {&a.lo_, &a.hi_};
  const Real* bs[2] = {&b.lo_, &b.hi_};
  Real lo(p), hi(p), t(p);
  bool first = true;
  for (const Real* x : as) {
    for (const Real* y : bs) {
      mpfr_mul(t.raw(), x->raw(), y->raw(), MPFR_RNDD);
      if (first || t < lo) lo = t;
      mpfr_mul(t.raw(), x->raw(), y->raw(), MPFR_RNDU);
      if (first || t > hi) hi = t;
      first = false;
    }
  }
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
  if (b.contains_zero()) throw DomainError("enclosure division by an interval containing zero");
  mpfr_prec_t p = std::min(a.prec(), b.prec());
  Real rlo(p), rhi(p);
  // reciprocal of b (b has constant sign)
  mpfr_ui_div(rlo.raw(), 1, b.hi_.raw(), MPFR_RNDD);
  mpfr_ui_div(rhi.raw(), 1, b.lo_.raw(), MPFR_RNDU);
  return a * Enclosure(std::move(rlo), std::move(rhi));
}

namespace {

Enclosure square(const Enclosure& x) {
  mpfr_prec_t p = x.prec();
  Real lo(p), hi(p);
  if (x.lo().sign() >= 0) {
    mpfr_sqr(lo.raw(), x.lo().raw(), MPFR_RNDD);
    mpfr_sqr(hi.raw(), x.hi().raw(), MPFR_RNDU);
  } else if (x.hi().sign() <= 0) {
    mpfr_sqr(lo.raw(), x.hi().raw(), MPFR_RNDD);
    mpfr_sqr(hi.raw(), x.lo().raw(), MPFR_RNDU);
  } else {
    mpfr_set_zero(lo.raw(), 1);
    Real m = x.mag();
    mpfr_sqr(hi.raw(), m.raw(), MPFR_RNDU);
  }
  return Enclosure(std::move(lo), std::move(hi));
}

}  // namespace

Enclosure Enclosure::pow_int(long k) const {
  if (k < 0) {
    Enclosure pos = pow_int(-k);
    if (pos.contains_zero()) throw DomainError("negative power of an interval containing zero");
    mpfr_prec_t p = pos.prec();
    Real rlo(p), rhi(p);
    mpfr_ui_div(rlo.raw(), 1, pos.hi().raw(), MPFR_RNDD);
    mpfr_ui_div(rhi.raw(), 1, pos.lo().raw(), MPFR_RNDU);
    return Enclosure(std::move(rlo), std::move(rhi));
  }
  if (k == 0) {
    Real one(1L, prec());
    return Enclosure(one, one);
  }
  if (k == 1) return *this;
  Enclosure half = pow_int(k / 2);
  Enclosure sq = square(half);
  return (k % 2 == 0) ? sq : sq * *this;
}

Enclosure Enclosure::hull(const Enclosure& o) const {
  return Enclosure(Real::min(lo_, o.lo_), Real::max(hi_, o.hi_));
}

std::ostream& operator<<(std::ostream& os, const Enclosure& v) {
  return os << "[" << v.lo() << ", " << v.hi() << "]";
}

Enclosure enc_exp(const Enclosure& x) { return increasing(x, mpfr_exp); }

Enclosure enc_ln(const Enclosure& x) {
  if (x.lo().sign() <= 0) throw DomainError("ln of a nonpositive enclosure");
  return increasing(x, mpfr_log);
}

Enclosure enc_sqrt(const Enclosure& x) {
  if (x.lo().sign() < 0) throw DomainError("sqrt of a negative enclosure");
  return increasing(x, mpfr_sqrt);
}

Enclosure enc_atan(const Enclosure& x) { return increasing(x, mpfr_atan); }

Enclosure enc_sinh(const Enclosure& x) { return increasing(x, mpfr_sinh); }

Enclosure enc_cosh(const Enclosure& x) {
  mpfr_prec_t p = x.prec();
  if (x.lo().sign() >= 0) return increasing(x, mpfr_cosh);
  if (x.hi().sign() <= 0) return increasing(-x, mpfr_cosh);
  Real lo(1L, p);
  Real hi = directed_unary(x.mag(), p, MPFR_RNDU, mpfr_cosh);
  return Enclosure(std::move(lo), std::move(hi));
}

namespace {

/// Index k with t in [k, k+1) for both ends of x/pi + shift, or no value
/// when the branch cannot be certified.
bool same_pi_branch(const Enclosure& x, const Rational& shift, long* branch) {
  mpfr_prec_t p = x.prec() + 32;
  Enclosure pi = enc_pi(p);
  Enclosure lifted = Enclosure(x.lo().round_to(p, MPFR_RNDD), x.hi().round_to(p, MPFR_RNDU));
  Enclosure t = lifted / pi + Enclosure(shift, p);
  Real fl(p), fh(p);
  mpfr_floor(fl.raw(), t.lo().raw());
  mpfr_floor(fh.raw(), t.hi().raw());
  if (fl != fh) return false;
  if (!fl.is_finite() || mpfr_fits_slong_p(fl.raw(), MPFR_RNDN) == 0) return false;
  *branch = mpfr_get_si(fl.raw(), MPFR_RNDN);
  return true;
}

/// Sound fallback for |f'| <= 1: f(mid) widened by the interval radius.
Enclosure lipschitz_unit(const Enclosure& x, int (*fn)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t)) {
  mpfr_prec_t p = x.prec();
  Real m = x.mid();
  Real lo = directed_unary(m, p, MPFR_RNDD, fn);
  Real hi = directed_unary(m, p, MPFR_RNDU, fn);
  Real r = x.width();  // >= max distance from mid
  Real one(1L, p);
  Real rlo(p), rhi(p);
  mpfr_sub(rlo.raw(), lo.raw(), r.raw(), MPFR_RNDD);
  mpfr_add(rhi.raw(), hi.raw(), r.raw(), MPFR_RNDU);
  if (rlo < -one) rlo = -one;
  if (rhi > one) rhi = one;
  return Enclosure(std::move(rlo), std::move(rhi));
}

}  // namespace

Enclosure enc_cos(const Enclosure& x) {
  long k;
  if (same_pi_branch(x, Rational(0), &k)) {
    // cos decreases on [k pi, (k+1) pi] for even k, increases for odd k.
    mpfr_prec_t p = x.prec();
    bool dec = (k % 2 == 0);
    const Real& at_lo = dec ? x.hi() : x.lo();
    const Real& at_hi = dec ? x.lo() : x.hi();
    return Enclosure(directed_unary(at_lo, p, MPFR_RNDD, mpfr_cos),
                     directed_unary(at_hi, p, MPFR_RNDU, mpfr_cos));
  }
  return lipschitz_unit(x, mpfr_cos);
}

Enclosure enc_sin(const Enclosure& x) {
  long k;
  if (same_pi_branch(x, Rational(1, 2), &k)) {
    // sin increases on [k pi - pi/2, k pi + pi/2] for even k.
    mpfr_prec_t p = x.prec();
    bool inc = (k % 2 == 0);
    const Real& at_lo = inc ? x.lo() : x.hi();
    const Real& at_hi = inc ? x.hi() : x.lo();
    return Enclosure(directed_unary(at_lo, p, MPFR_RNDD, mpfr_sin),
                     directed_unary(at_hi, p, MPFR_RNDU, mpfr_sin));
  }
  return lipschitz_unit(x, mpfr_sin);
}

Enclosure enc_tan(const Enclosure& x) {
  long k;
  if (!same_pi_branch(x, Rational(1, 2), &k))
    throw DomainError("tan over an interval that may contain a pole");
  return increasing(x, mpfr_tan);
}

Enclosure enc_pi(mpfr_prec_t prec) {
  Real lo(prec), hi(prec);
  mpfr_const_pi(lo.raw(), MPFR_RNDD);
  mpfr_const_pi(hi.raw(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

Enclosure enc_e(mpfr_prec_t prec) {
  Real one(1L, prec);
  Real lo(prec), hi(prec);
  mpfr_exp(lo.raw(), one.raw(), MPFR_RNDD);
  mpfr_exp(hi.raw(), one.raw(), MPFR_RNDU);
  return Enclosure(std::move(lo), std::move(hi));
}

}  // namespace polstar
