#include "polstar/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace polstar {

Rational::Rational(long n, long d) {
  if (d == 0) throw std::invalid_argument("Rational: zero denominator");
  mpq_init(q_);
  mpq_set_si(q_, n, 1);
  mpq_t den;
  mpq_init(den);
  mpq_set_si(den, d, 1);
  mpq_div(q_, q_, den);
  mpq_clear(den);
}

Rational::Rational(const Int& n, const Int& d) {
  if (d.is_zero()) throw std::invalid_argument("Rational: zero denominator");
  mpq_init(q_);
  mpz_set(mpq_numref(q_), n.raw());
  mpz_set(mpq_denref(q_), d.raw());
  if (mpz_sgn(mpq_denref(q_)) < 0) {
    mpz_neg(mpq_numref(q_), mpq_numref(q_));
    mpz_neg(mpq_denref(q_), mpq_denref(q_));
  }
  mpq_canonicalize(q_);
}

Rational Rational::from_string(const std::string& s) {
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    // Plain decimal: digits '.' digits, optional leading sign.
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || frac_len == 0) throw std::invalid_argument("Rational: malformed decimal '" + s + "'");
    Rational r;
    if (mpq_set_str(r.q_, digits.c_str(), 10) != 0)
      throw std::invalid_argument("Rational: malformed decimal '" + s + "'");
    mpz_t p10;
    mpz_init(p10);
    mpz_ui_pow_ui(p10, 10, frac_len);
    mpz_mul(mpq_denref(r.q_), mpq_denref(r.q_), p10);
    mpz_clear(p10);
    mpq_canonicalize(r.q_);
    return r;
  }
  Rational r;
  if (mpq_set_str(r.q_, s.c_str(), 10) != 0 || mpz_sgn(mpq_denref(r.q_)) == 0)
    throw std::invalid_argument("Rational: malformed rational '" + s + "'");
  if (mpz_sgn(mpq_denref(r.q_)) < 0) {
    mpz_neg(mpq_numref(r.q_), mpq_numref(r.q_));
    mpz_neg(mpq_denref(r.q_), mpq_denref(r.q_));
  }
  mpq_canonicalize(r.q_);
  return r;
}

Rational Rational::dyadic(const Int& num, long exp) {
  Rational r(num);
  return r.mul_2exp(exp);
}

Int Rational::floor() const {
  Int r;
  mpz_fdiv_q(r.raw(), mpq_numref(q_), mpq_denref(q_));
  return r;
}

Int Rational::ceil() const {
  Int r;
  mpz_cdiv_q(r.raw(), mpq_numref(q_), mpq_denref(q_));
  return r;
}

Rational Rational::mul_2exp(long k) const {
  Rational r;
  if (k >= 0)
    mpq_mul_2exp(r.q_, q_, static_cast<unsigned long>(k));
  else
    mpq_div_2exp(r.q_, q_, static_cast<unsigned long>(-k));
  return r;
}

Rational Rational::pow(unsigned long k) const {
  Rational r;
  mpz_pow_ui(mpq_numref(r.q_), mpq_numref(q_), k);
  mpz_pow_ui(mpq_denref(r.q_), mpq_denref(q_), k);
  return r;  // canonical since base is canonical
}

Rational Rational::reciprocal() const {
  if (is_zero()) throw std::invalid_argument("Rational: reciprocal of zero");
  Rational r;
  mpq_inv(r.q_, q_);
  return r;
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::invalid_argument("Rational: division by zero");
  Rational r;
  mpq_div(r.q_, a.q_, b.q_);
  return r;
}

std::string Rational::str() const {
  char* buf = mpq_get_str(nullptr, 10, q_);
  std::string s(buf);
  void (*freefn)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefn);
  freefn(buf, s.size() + 1);
  return s;
}

std::ostream& operator<<(std::ostream& os, const Rational& v) { return os << v.str(); }

}  // namespace polstar
