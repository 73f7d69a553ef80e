#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "polstar/supnorm.hpp"

using namespace polstar;

namespace {

// Dyadic value just below pi/4 (gap < 2^-50), exact.
Rational quarter_pi_dyadic() {
  Enclosure pi = enc_pi(160);
  Rational lo = pi.lo().to_rational().mul_2exp(-2);
  return Rational::dyadic(lo.mul_2exp(50).floor(), -50);
}

Polynomial hatp_cos() {
  return Polynomial({Rational(1), Rational(5, 1024), Rational(-17, 32), Rational(1, 16)});
}

Polynomial pstar_cos() {
  return Polynomial({Rational(4095, 4096), Rational(3, 512), Rational(-17, 32), Rational(1, 16)});
}

double rel_err(const Real& got, double want) {
  return std::abs(got.to_double() - want) / std::abs(want);
}

}  // namespace

TEST_CASE("norm of the rounded cosine cubic matches the reference distance") {
  FunctionOracle f = make_oracle("cos");
  Rational a = quarter_pi_dyadic();
  NormResult r = sup_norm(f, hatp_cos(), a);
  CHECK(rel_err(r.value.mid(), 6.939707e-4) < 1e-6);
  // witness invariant
  Enclosure ew = eval_enclosure(f.expr, r.witness, 256) - Enclosure(hatp_cos().eval(r.witness), 256);
  Real wmag = ew.abs_enclosure().mid();
  CHECK(wmag >= r.value.lo() * Real(Rational(999999, 1000000), 64));
  CHECK(wmag <= r.value.hi() * Real(Rational(1000001, 1000000), 64));
}

TEST_CASE("norm of the best truncated cosine cubic is exactly one grid step at zero") {
  FunctionOracle f = make_oracle("cos");
  Rational a = quarter_pi_dyadic();
  SupNormOptions opts;
  opts.tol_bits = 60;
  NormResult r = sup_norm(f, pstar_cos(), a, opts);
  CHECK(rel_err(r.value.mid(), 2.441406250e-4) < 1e-8);
  // the maximum sits at x = 0 where the error is exactly 2^-12
  CHECK(r.value.hi().to_double() >= 2.44140625e-4);
}

TEST_CASE("identical function and polynomial give a zero norm") {
  Polynomial q({Rational(0), Rational(0), Rational(1)});
  FunctionOracle f = FunctionOracle::from_expr(parse("x^2"));
  NormResult r = sup_norm(f, q, Rational(3, 2));
  CHECK(r.value.hi().is_zero());
  CHECK(r.value.lo().is_zero());
}

TEST_CASE("grid lower bound is sound and monotone") {
  FunctionOracle f = make_oracle("cos");
  Rational a = quarter_pi_dyadic();
  Polynomial q = pstar_cos();

  Real at_zero = grid_lower_bound(f, q, {Rational(0)}, 128);
  // e(0) = 1 - 4095/4096 = 2^-12 exactly
  CHECK(at_zero.to_double() == doctest::Approx(2.44140625e-4).epsilon(1e-12));
  CHECK(at_zero <= Real(Rational(1, 4096), 128));

  std::vector<Rational> pts;
  Real prev(0L, 128);
  for (int k = 0; k <= 16; ++k) {
    pts.push_back(a * Rational(k, 16));
    Real cur = grid_lower_bound(f, q, pts, 128);
    CHECK(cur >= prev);  // refinement never decreases the bound
    prev = cur;
  }
  NormResult full = sup_norm(f, q, a);
  CHECK(prev <= full.value.hi());

  // exactly representable function: bound is zero
  FunctionOracle fx2 = FunctionOracle::from_expr(parse("x^2"));
  Polynomial x2({Rational(0), Rational(0), Rational(1)});
  CHECK(grid_lower_bound(fx2, x2, pts, 128).is_zero());
}

TEST_CASE("dense-scan oracle agrees with the certified norm") {
  struct Case {
    const char* fn;
    Polynomial q;
    Rational a;
  };
  std::vector<Case> cases;
  cases.push_back({"cos", hatp_cos(), quarter_pi_dyadic()});
  cases.push_back({"exp",
                   Polynomial({Rational(1), Rational(1), Rational(1, 2), Rational(1, 6),
                               Rational(1, 24), Rational(7, 880)}),
                   Rational(1)});
  cases.push_back(
      {"ln(1 + x)", Polynomial({Rational(0), Rational(1), Rational(-39, 80)}), Rational(1, 2)});

  for (const auto& c : cases) {
    FunctionOracle f = make_oracle(c.fn);
    NormResult r = sup_norm(f, c.q, c.a);
    // independent scan: max |f - q| over a dense uniform grid via plain
    // round-to-nearest evaluation
    const long N = 100000;
    Real best(0L, 160);
    for (long j = 0; j <= N; ++j) {
      Rational x = c.a * Rational(j, N);
      Real fx = eval_real(f.expr, Real(x, 160));
      Real qx = c.q.eval(Real(x, 160));
      Real mag = (fx - qx).abs();
      if (mag > best) best = mag;
    }
    double scan = best.to_double();
    double lo = r.value.lo().to_double();
    double hi = r.value.hi().to_double();
    CHECK(scan <= hi * (1 + 1e-9));
    CHECK(scan >= lo * (1 - 1e-5));
  }
}

TEST_CASE("perturbed low-degree minimax battery stays certified") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> num(-40, 40);
  FunctionOracle f = make_oracle("exp");
  Polynomial base({Rational(1), Rational(1), Rational(1, 2), Rational(1, 6), Rational(1, 24),
                   Rational(1, 120)});
  for (int t = 0; t < 4; ++t) {
    std::vector<Rational> c = base.coeffs();
    for (auto& ci : c) ci += Rational(num(rng), 100000);
    Polynomial q(std::move(c));
    NormResult r = sup_norm(f, q, Rational(1));
    const long N = 20000;
    Real best(0L, 160);
    for (long j = 0; j <= N; ++j) {
      Rational x(j, N);
      Real mag = (eval_real(f.expr, Real(x, 160)) - q.eval(Real(x, 160))).abs();
      if (mag > best) best = mag;
    }
    CHECK(best.to_double() <= r.value.hi().to_double() * (1 + 1e-9));
    CHECK(best.to_double() >= r.value.lo().to_double() * (1 - 1e-4));
  }
}

TEST_CASE("give-up bound aborts early with a certified lower bound") {
  FunctionOracle f = make_oracle("cos");
  Rational a = quarter_pi_dyadic();
  SupNormOptions opts;
  opts.give_up_above = Rational(1, 1000000);  // far below the actual norm
  NormResult r = sup_norm(f, hatp_cos(), a, opts);
  CHECK(r.aborted);
  CHECK(r.value.lo().to_rational() > Rational(1, 1000000));
}

TEST_CASE("unresolvable tolerance raises the explicit norm error") {
  FunctionOracle f = make_oracle("cos");
  SupNormOptions opts;
  opts.tol_bits = 400;   // far beyond what one attempt at 64 bits can do
  opts.prec = 64;
  opts.max_attempts = 1;
  CHECK_THROWS_AS(sup_norm(f, hatp_cos(), quarter_pi_dyadic(), opts), PrecisionError);
}

TEST_CASE("point cache returns identical enclosures") {
  FunctionOracle f = make_oracle("exp");
  SupNormCache cache;
  std::vector<Rational> pts = {Rational(1, 3), Rational(2, 3), Rational(1)};
  Real a1 = grid_lower_bound(f, Polynomial({Rational(1)}), pts, 128, &cache);
  Real a2 = grid_lower_bound(f, Polynomial({Rational(1)}), pts, 128, &cache);
  CHECK(a1 == a2);
  SupNormOptions opts;
  opts.cache = &cache;
  NormResult r1 = sup_norm(f, Polynomial({Rational(1), Rational(1)}), Rational(1), opts);
  NormResult r2 = sup_norm(f, Polynomial({Rational(1), Rational(1)}), Rational(1), opts);
  CHECK(r1.value.lo() == r2.value.lo());
  CHECK(r1.value.hi() == r2.value.hi());
}
