#pragma once

#include <gmp.h>

#include <iosfwd>
#include <string>

namespace polstar {

/// Arbitrary-size integer (value type around GMP's mpz_t).
class Int {
 public:
  Int() { mpz_init(z_); }
  Int(long v) { mpz_init_set_si(z_, v); }  // NOLINT: implicit by design
  explicit Int(const std::string& s);
  Int(const Int& o) { mpz_init_set(z_, o.z_); }
  Int(Int&& o) noexcept {
    mpz_init(z_);
    mpz_swap(z_, o.z_);
  }
  ~Int() { mpz_clear(z_); }

  Int& operator=(const Int& o) {
    if (this != &o) mpz_set(z_, o.z_);
    return *this;
  }
  Int& operator=(Int&& o) noexcept {
    mpz_swap(z_, o.z_);
    return *this;
  }

  /// 2^k for k >= 0.
  static Int pow2(unsigned long k) {
    Int r;
    mpz_ui_pow_ui(r.z_, 2, k);
    return r;
  }

  int sign() const { return mpz_sgn(z_); }
  bool is_zero() const { return mpz_sgn(z_) == 0; }
  Int abs() const {
    Int r;
    mpz_abs(r.z_, z_);
    return r;
  }
  bool is_even() const { return mpz_even_p(z_) != 0; }

  bool fits_long() const { return mpz_fits_slong_p(z_) != 0; }
  long to_long() const { return mpz_get_si(z_); }
  double to_double() const { return mpz_get_d(z_); }

  std::string str() const;

  friend Int operator+(const Int& a, const Int& b) {
    Int r;
    mpz_add(r.z_, a.z_, b.z_);
    return r;
  }
  friend Int operator-(const Int& a, const Int& b) {
    Int r;
    mpz_sub(r.z_, a.z_, b.z_);
    return r;
  }
  friend Int operator-(const Int& a) {
    Int r;
    mpz_neg(r.z_, a.z_);
    return r;
  }
  friend Int operator*(const Int& a, const Int& b) {
    Int r;
    mpz_mul(r.z_, a.z_, b.z_);
    return r;
  }
  Int& operator+=(const Int& o) {
    mpz_add(z_, z_, o.z_);
    return *this;
  }
  Int& operator-=(const Int& o) {
    mpz_sub(z_, z_, o.z_);
    return *this;
  }
  Int& operator*=(const Int& o) {
    mpz_mul(z_, z_, o.z_);
    return *this;
  }
  Int& operator++() {
    mpz_add_ui(z_, z_, 1);
    return *this;
  }

  friend bool operator==(const Int& a, const Int& b) { return mpz_cmp(a.z_, b.z_) == 0; }
  friend bool operator!=(const Int& a, const Int& b) { return mpz_cmp(a.z_, b.z_) != 0; }
  friend bool operator<(const Int& a, const Int& b) { return mpz_cmp(a.z_, b.z_) < 0; }
  friend bool operator<=(const Int& a, const Int& b) { return mpz_cmp(a.z_, b.z_) <= 0; }
  friend bool operator>(const Int& a, const Int& b) { return mpz_cmp(a.z_, b.z_) > 0; }
  friend bool operator>=(const Int& a, const Int& b) { return mpz_cmp(a.z_, b.z_) >= 0; }

  friend std::ostream& operator<<(std::ostream& os, const Int& v);

  mpz_srcptr raw() const { return z_; }
  mpz_ptr raw() { return z_; }

 private:
  mpz_t z_;
};

}  // namespace polstar
