#include "polstar/real.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace polstar {

Rational Real::to_rational() const {
  if (!is_finite()) throw std::invalid_argument("Real: to_rational of non-finite value");
  Rational r;
  mpfr_get_q(r.raw(), f_);
  return r;
}

double Real::log2_approx() const {
  mpfr_t t;
  mpfr_init2(t, 64);
  mpfr_log2(t, f_, MPFR_RNDN);
  double d = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return d;
}

std::string Real::str(std::size_t digits) const {
  if (mpfr_nan_p(f_)) return "nan";
  if (mpfr_inf_p(f_)) return mpfr_sgn(f_) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(f_)) return "0";
  mpfr_exp_t e;
  char* buf = mpfr_get_str(nullptr, &e, 10, digits, f_, MPFR_RNDN);
  std::string m(buf);
  mpfr_free_str(buf);
  bool neg = m[0] == '-';
  std::string mag = neg ? m.substr(1) : m;
  if (digits == 0) {
    // Round-trip mode: trim trailing zeros but keep at least one digit.
    auto last = mag.find_last_not_of('0');
    mag = mag.substr(0, std::max<std::size_t>(last + 1, 1));
  }
  // mantissa is 0.mag * 10^e; render as d.ddd...e+dd
  std::string out = neg ? "-" : "";
  out += mag.substr(0, 1);
  if (mag.size() > 1) out += "." + mag.substr(1);
  long ee = static_cast<long>(e) - 1;
  if (ee != 0) out += "e" + std::to_string(ee);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Real& v) { return os << v.str(); }

}  // namespace polstar
