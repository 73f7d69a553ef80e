#include "polstar/chebyshev.hpp"

#include "polstar/errors.hpp"

namespace polstar {

Polynomial chebyshev_t(unsigned n) {
  Polynomial prev({Rational(1)});
  if (n == 0) return prev;
  Polynomial cur({Rational(0), Rational(1)});
  Polynomial two_x({Rational(0), Rational(2)});
  for (unsigned k = 2; k <= n; ++k) {
    Polynomial next = two_x * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

Polynomial chebyshev_t_star(unsigned n) {
  return chebyshev_t(n).compose_linear(Rational(2), Rational(-1));
}

BetaVector beta_vector(unsigned n, const Rational& a) {
  if (a.sign() <= 0) throw DomainError("beta_vector: interval endpoint must be positive");
  BetaVector bv;
  bv.a = a;
  bv.n = n;
  Polynomial scaled = chebyshev_t_star(n).stretch(a);
  bv.betas.reserve(n + 1);
  for (unsigned i = 0; i <= n; ++i) bv.betas.push_back(scaled.coeff(i));
  return bv;
}

Polynomial min_norm_monic(unsigned n, const Rational& a, const Rational& b) {
  if (!(a < b)) throw DomainError("min_norm_monic: requires a < b");
  Rational len = b - a;
  // T_n((2x - b - a) / (b - a)) scaled by (b-a)^n / 2^(2n-1).
  Rational s = Rational(2) / len;
  Rational t = -(b + a) / len;
  Polynomial composed = chebyshev_t(n).compose_linear(s, t);
  Rational scale = len.pow(n).mul_2exp(1 - 2 * static_cast<long>(n));
  return scale * composed;
}

}  // namespace polstar
