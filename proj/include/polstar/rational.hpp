#pragma once

#include <gmp.h>

#include <iosfwd>
#include <string>

#include "polstar/integer.hpp"

namespace polstar {

/// Exact rational number, always in lowest terms with positive denominator.
class Rational {
 public:
  Rational() { mpq_init(q_); }
  Rational(long n) {  // NOLINT: implicit by design
    mpq_init(q_);
    mpq_set_si(q_, n, 1);
  }
  Rational(long n, long d);
  Rational(const Int& n, const Int& d);
  explicit Rational(const Int& n) {
    mpq_init(q_);
    mpq_set_z(q_, n.raw());
  }
  Rational(const Rational& o) {
    mpq_init(q_);
    mpq_set(q_, o.q_);
  }
  Rational(Rational&& o) noexcept {
    mpq_init(q_);
    mpq_swap(q_, o.q_);
  }
  ~Rational() { mpq_clear(q_); }

  Rational& operator=(const Rational& o) {
    if (this != &o) mpq_set(q_, o.q_);
    return *this;
  }
  Rational& operator=(Rational&& o) noexcept {
    mpq_swap(q_, o.q_);
    return *this;
  }

  /// Parses "p", "-p/q" or a plain decimal like "0.125" into an exact value.
  static Rational from_string(const std::string& s);

  /// num * 2^exp, exact for any sign of exp.
  static Rational dyadic(const Int& num, long exp);

  Int numerator() const {
    Int r;
    mpz_set(r.raw(), mpq_numref(q_));
    return r;
  }
  Int denominator() const {
    Int r;
    mpz_set(r.raw(), mpq_denref(q_));
    return r;
  }

  int sign() const { return mpq_sgn(q_); }
  bool is_zero() const { return mpq_sgn(q_) == 0; }
  bool is_integer() const { return mpz_cmp_ui(mpq_denref(q_), 1) == 0; }
  Rational abs() const {
    Rational r;
    mpq_abs(r.q_, q_);
    return r;
  }

  /// Largest integer <= value.
  Int floor() const;
  /// Smallest integer >= value.
  Int ceil() const;

  /// value * 2^k, exact.
  Rational mul_2exp(long k) const;

  /// value^k for k >= 0.
  Rational pow(unsigned long k) const;

  Rational reciprocal() const;

  double to_double() const { return mpq_get_d(q_); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b) {
    Rational r;
    mpq_add(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    Rational r;
    mpq_sub(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rational operator-(const Rational& a) {
    Rational r;
    mpq_neg(r.q_, a.q_);
    return r;
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    Rational r;
    mpq_mul(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rational operator/(const Rational& a, const Rational& b);

  Rational& operator+=(const Rational& o) {
    mpq_add(q_, q_, o.q_);
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    mpq_sub(q_, q_, o.q_);
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    mpq_mul(q_, q_, o.q_);
    return *this;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.q_, b.q_) != 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return mpq_equal(a.q_, b.q_) == 0; }
  friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) > 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) >= 0; }

  friend std::ostream& operator<<(std::ostream& os, const Rational& v);

  mpq_srcptr raw() const { return q_; }
  mpq_ptr raw() { return q_; }

 private:
  mpq_t q_;
};

}  // namespace polstar
