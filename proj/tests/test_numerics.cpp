#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "polstar/enclosure.hpp"
#include "polstar/rounding.hpp"

using namespace polstar;

namespace {

Rational rq(const char* s) { return Rational::from_string(s); }

std::mt19937_64 rng(20260808);

Rational random_rational(long max_num = 1000, long max_den = 1000) {
  std::uniform_int_distribution<long> num(-max_num, max_num);
  std::uniform_int_distribution<long> den(1, max_den);
  return Rational(num(rng), den(rng));
}

}  // namespace

TEST_CASE("round_to_multiple matches the worked values") {
  CHECK(round_to_multiple(rq("-0.5303088665"), 6) == Rational(-17, 32));
  CHECK(round_to_multiple(rq("0.00469021603"), 10) == Rational(5, 1024));
  // exact tie 1.5/8 resolves to the even scaled integer 2
  CHECK(round_to_multiple(Rational(3, 16), 3) == Rational(1, 4));
  CHECK(round_to_multiple(Rational(-3, 16), 3) == Rational(-1, 4));

  Real x(rq("-0.5303088665"), 128);
  CHECK(round_to_multiple(x, 6) == Rational(-17, 32));
  Real tie(Rational(3, 16), 128);
  CHECK(round_to_multiple(tie, 3) == Rational(1, 4));
}

TEST_CASE("scaled floor/ceil matches the worked values") {
  CHECK(floor_scaled(rq("1.000347"), 12) == Int(4097));
  CHECK(ceil_scaled(rq("0.999425"), 12) == Int(4094));
  for (long m : {-3L, 0L, 5L, 40L}) {
    CHECK(floor_scaled(Rational(0), m) == Int(0));
    CHECK(ceil_scaled(Rational(0), m) == Int(0));
  }
  // negative m means the grid 2^|m|
  CHECK(round_to_multiple(Rational(13), -2) == Rational(12));
  CHECK(floor_scaled(Rational(13), -2) == Int(3));
}

TEST_CASE("rounding invariants on random inputs") {
  for (int trial = 0; trial < 500; ++trial) {
    Rational x = random_rational();
    std::uniform_int_distribution<long> md(0, 20);
    long m = md(rng);
    Rational r = round_to_multiple(x, m);
    // r * 2^m is an integer
    CHECK(r.mul_2exp(m).is_integer());
    // |x - r| <= 2^(-m-1)
    CHECK((x - r).abs() <= Rational(1).mul_2exp(-m - 1));
  }
}

TEST_CASE("ceil_scaled <= floor_scaled across a full grid step") {
  for (int trial = 0; trial < 200; ++trial) {
    Rational x = random_rational();
    std::uniform_int_distribution<long> md(0, 12);
    long m = md(rng);
    Rational gap = Rational(1).mul_2exp(-m);
    Rational y = x + gap + random_rational(100, 100).abs();
    CHECK(ceil_scaled(x, m) <= floor_scaled(y, m));
  }
}

TEST_CASE("enclosure variants never exclude an admissible integer") {
  // floor from hi (largest admissible), ceil from lo (smallest admissible)
  Enclosure e(rq("4097.4999"), rq("4097.5001"), 128);
  CHECK(floor_scaled(e, 0) == Int(4097));
  CHECK(ceil_scaled(e, 0) == Int(4098));

  Enclosure spanning(rq("4096.9999"), rq("4097.0001"), 128);
  CHECK(floor_scaled(spanning, 0) == Int(4097));
  CHECK(ceil_scaled(spanning, 0) == Int(4097));
  CHECK(floor_scaled(Enclosure(rq("4097.5"), 128), 0) == Int(4097));
}

TEST_CASE("Real arithmetic carries the minimum operand precision") {
  Real a(Rational(1, 3), 128);
  Real b(Rational(1, 7), 256);
  CHECK((a + b).prec() == 128);
  CHECK((a * b).prec() == 128);
  Real c(Rational(1, 7), 64);
  CHECK((a - c).prec() == 64);
}

TEST_CASE("Real precision is clamped to the floor") {
  Real tiny(Rational(1, 3), 8);
  CHECK(tiny.prec() >= 64);
}

TEST_CASE("enclosure arithmetic is conservative on random rational expressions") {
  for (int trial = 0; trial < 300; ++trial) {
    Rational a = random_rational();
    Rational b = random_rational();
    Rational c = random_rational(50, 50);
    if (c.is_zero()) c = Rational(1, 3);
    // exact value of (a*b + a - b) / c computed two ways
    Rational exact = (a * b + a - b) / c;
    Enclosure ea(a, 96), eb(b, 96), ec(c, 96);
    Enclosure got = (ea * eb + ea - eb) / ec;
    CHECK(got.contains(exact));
  }
}

TEST_CASE("pow_int is dependency-aware across zero") {
  Enclosure x(Rational(-1, 2), Rational(1, 3), 96);
  Enclosure sq = x.pow_int(2);
  CHECK(sq.lo().sign() >= 0);
  CHECK(sq.contains(Rational(1, 16)));
  CHECK(sq.contains(Rational(0)));
  Enclosure cube = x.pow_int(3);
  CHECK(cube.contains(Rational(-1, 8)));
  CHECK(cube.contains(Rational(1, 27)));
}

TEST_CASE("monotone enclosure transcendentals bracket known points") {
  Enclosure one(Rational(1), 128);
  CHECK(enc_ln(enc_exp(one)).contains(Rational(1)));
  CHECK(enc_sqrt(Enclosure(Rational(9, 4), 128)).contains(Rational(3, 2)));
  CHECK_THROWS_AS(enc_ln(Enclosure(Rational(-1), 128)), DomainError);
  CHECK_THROWS_AS(enc_sqrt(Enclosure(Rational(-1), 128)), DomainError);
  CHECK_THROWS_AS(Enclosure(Rational(1), 128) / Enclosure(Rational(-1), Rational(1), 128),
                  DomainError);
}

TEST_CASE("sin/cos enclosures stay sound across branch boundaries") {
  // interval straddling pi: cos has a minimum inside
  Enclosure pi = enc_pi(128);
  Enclosure x(Real(Rational(3), 128), Real(Rational(7, 2), 128));
  Enclosure c = enc_cos(x);
  CHECK(c.lo() <= Real(Rational(-1), 128));

  // near-point interval on a certified branch is tight
  Enclosure p(Rational(1, 3), 128);
  Enclosure cp = enc_cos(p);
  CHECK(cp.width().to_double() < 1e-30);

  CHECK_THROWS_AS(enc_tan(Enclosure(Rational(1), Rational(2), 128)), DomainError);
  Enclosure t = enc_tan(Enclosure(Rational(1, 4), Rational(1, 3), 128));
  CHECK(t.lo().to_double() > 0.25);
}
