// Acceptance suite: one test case per criterion, one PASS/FAIL line each.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <cstdio>
#include <random>

#include "polstar/chebyshev.hpp"
#include "polstar/pipeline.hpp"
#include "polstar/rounding.hpp"

using namespace polstar;

namespace {

struct Criterion {
  const char* name;
  bool ok = true;
  std::vector<std::string> failures;

  explicit Criterion(const char* n) : name(n) {}
  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      failures.push_back(what);
    }
    CHECK_MESSAGE(cond, what);
  }
  ~Criterion() {
    std::printf("criterion %s: %s\n", name, ok ? "PASS" : "FAIL");
    for (const auto& f : failures) std::printf("  failed: %s\n", f.c_str());
    std::fflush(stdout);
  }
};

bool rel_within(const std::string& decimal, double want, double tol) {
  double got = std::stod(decimal);
  return std::abs(got - want) <= tol * std::abs(want);
}

std::vector<std::string> counts_of(const BoxReport& b) {
  std::vector<std::string> out;
  for (const auto& d : b.degrees) out.push_back(d.count);
  return out;
}

ProblemConfig cos_config(int workers = 0) {
  ProblemConfig cfg;
  cfg.function = "cos";
  cfg.endpoint = "pi/4";
  cfg.degree = 3;
  cfg.bits.bits = {12, 10, 6, 4};
  cfg.lambda = Rational(1, 2);
  cfg.workers = workers;
  return cfg;
}

ProblemConfig exp_config(int workers = 0) {
  ProblemConfig cfg;
  cfg.function = "exp";
  cfg.endpoint = "log(1+1/2048)";
  cfg.degree = 3;
  cfg.bits.bits = {56, 45, 33, 23};
  cfg.lambda = Rational(1);
  cfg.refine_d = 25;
  cfg.workers = workers;
  return cfg;
}

double run_seconds(const ProblemConfig& cfg, Report* out) {
  auto t0 = std::chrono::steady_clock::now();
  *out = polstar::polstar(cfg);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Rational random_rational(std::mt19937_64& rng, long lo_num, long hi_num, long max_den) {
  std::uniform_int_distribution<long> num(lo_num, hi_num);
  std::uniform_int_distribution<long> den(1, max_den);
  return Rational(num(rng), den(rng));
}

}  // namespace

TEST_CASE("criterion 1 cosine") {
  Criterion c("1 (cosine session)");
  Report r;
  double secs = run_seconds(cos_config(), &r);

  c.check(rel_within(r.epsilon.mid, 1.135879209e-4, 1e-6),
          "epsilon = " + r.epsilon.mid + ", expected 1.135879209e-4 within rel 1e-6");
  c.check(rel_within(r.epsilon_hat.mid, 6.939707e-4, 1e-6),
          "epsilon_hat = " + r.epsilon_hat.mid + ", expected 6.939707e-4 within rel 1e-6");
  c.check(counts_of(r.box) == std::vector<std::string>{"4", "22", "5", "1"},
          "per-degree candidate counts must be [4, 22, 5, 1]");
  c.check(r.box.total == "440", "total candidates must be 440");
  REQUIRE(r.have_pstar);
  c.check(r.pstar[0].fraction == "4095/4096", "pstar x^0 must be 4095/4096");
  c.check(r.pstar[1].fraction == "3/512", "pstar x^1 must be 3/512");
  c.check(r.pstar[2].fraction == "-17/32", "pstar x^2 must be -17/32");
  c.check(r.pstar[3].fraction == "1/16", "pstar x^3 must be 1/16");
  c.check(rel_within(r.pstar_error.mid, 2.441406250e-4, 1e-8),
          "pstar error = " + r.pstar_error.mid + ", expected 2.441406250e-4 within rel 1e-8");
  c.check(std::abs(r.bits_saved - 1.5) <= 0.05, "bits_saved must be 1.5 +- 0.05");
  c.check(secs < 60.0, "runtime must stay under 60 s");
}

TEST_CASE("criterion 2 exponential") {
  Criterion c("2 (exponential session)");
  Report r;
  double secs = run_seconds(exp_config(), &r);

  c.check(rel_within(r.epsilon.mid, 1.849017208895e-17, 1e-6),
          "epsilon = " + r.epsilon.mid + ", expected 1.849017208895e-17 within rel 1e-6");
  c.check(counts_of(r.box) == std::vector<std::string>{"6", "109", "146", "194"},
          "unrefined counts must be [6, 109, 146, 194]");
  c.check(r.box.total == "18523896", "unrefined total must be 18523896");
  REQUIRE(r.refined);
  c.check(counts_of(r.refined_box) == std::vector<std::string>{"2", "27", "32", "44"},
          "refined counts must be [2, 27, 32, 44]");
  c.check(r.refined_box.total == "76032", "refined total must be 76032");
  REQUIRE(r.have_pstar);
  c.check(r.pstar[0].fraction == "72057594037927935/72057594037927936",
          "pstar x^0 must be 72057594037927935/2^56");
  c.check(r.pstar[1].fraction == "35184372088873/35184372088832",
          "pstar x^1 must be 35184372088873/2^45");
  c.check(r.pstar[2].fraction == "2147483595/4294967296", "pstar x^2 must be 2147483595/2^32");
  c.check(r.pstar[3].fraction == "1398443/8388608", "pstar x^3 must be 1398443/2^23");
  c.check(rel_within(r.pstar_error.mid, 2.0246280367e-17, 1e-6),
          "pstar error = " + r.pstar_error.mid + ", expected 2.0246280367e-17 within rel 1e-6");
  c.check(std::abs(r.bits_saved - 0.22) <= 0.02, "bits_saved must be 0.22 +- 0.02");
  c.check(secs <= 1800.0, "runtime must stay within 30 minutes");
}

TEST_CASE("criterion 3 smallest-norm bound") {
  Criterion c("3 (scaled-Chebyshev norm oracle)");
  std::mt19937_64 rng(3033);

  // Part 1: the extremal polynomial's norm equals 1/|beta_k| within 1e-12;
  // one random k per (draw, n) keeps the battery at 160 certified norms.
  for (int draw = 0; draw < 20; ++draw) {
    Rational a = random_rational(rng, 1, 64, 16);
    if (a > Rational(4)) a = Rational(4);
    for (unsigned n = 1; n <= 8; ++n) {
      BetaVector beta = beta_vector(n, a);
      unsigned kk = 1 + static_cast<unsigned>(rng() % n);
      Polynomial extremal = beta.betas[kk].reciprocal() * chebyshev_t_star(n).stretch(a);
      FunctionOracle fo = FunctionOracle::from_expr(polynomial_to_expr(extremal));
      SupNormOptions opts;
      opts.tol_bits = 50;
      NormResult norm = sup_norm(fo, Polynomial{}, a, opts);
      Rational bound = beta.betas[kk].abs().reciprocal();
      Real want(bound, 192);
      Real gap = (norm.value.mid() - want).abs() / want;
      if (!(gap.to_double() < 1e-12)) {
        c.check(false, "norm of the extremal polynomial off at n=" + std::to_string(n) +
                           " k=" + std::to_string(kk) + " a=" + a.str());
      }
    }
  }
  c.check(true, "extremal norms checked");

  // Part 2: 200 random polynomials with degree-k coefficient 1 never beat it.
  int tested = 0;
  while (tested < 200) {
    unsigned n = 1 + static_cast<unsigned>(rng() % 8);
    unsigned k = 1 + static_cast<unsigned>(rng() % n);
    Rational a = random_rational(rng, 1, 64, 16);
    if (a > Rational(4)) a = Rational(4);
    BetaVector beta = beta_vector(n, a);
    Rational bound = beta.betas[k].abs().reciprocal();

    std::vector<Rational> coeffs(n + 1);
    bool perturb_extremal = (tested % 2) == 0;
    Polynomial extremal = beta.betas[k].reciprocal() * chebyshev_t_star(n).stretch(a);
    for (unsigned i = 0; i <= n; ++i) {
      if (i == k) {
        coeffs[i] = Rational(1);
      } else if (perturb_extremal) {
        coeffs[i] = extremal.coeff(i) + random_rational(rng, -50, 50, 100000) * bound;
      } else {
        coeffs[i] = random_rational(rng, -200, 200, 100);
      }
    }
    Polynomial q(std::move(coeffs));
    FunctionOracle fo = FunctionOracle::from_expr(polynomial_to_expr(q));
    Rational threshold = bound * Rational(9999999999L, 10000000000L);  // 1 - 1e-10
    // cheap certified lower bound first, full norm only if needed
    std::vector<Rational> pts;
    for (int j = 0; j <= 64; ++j) pts.push_back(a * Rational(j, 64));
    Real lb = grid_lower_bound(fo, Polynomial{}, pts, 128);
    bool okq = lb.to_rational() >= threshold;
    if (!okq) {
      NormResult norm = sup_norm(fo, Polynomial{}, a);
      okq = norm.value.lo().to_rational() >= threshold;
    }
    if (!okq)
      c.check(false, "a degree-" + std::to_string(n) + " polynomial with unit x^" +
                         std::to_string(k) + " coefficient undercut 1/|beta_k| at a=" + a.str());
    ++tested;
  }
  c.check(tested == 200, "random lower-bound battery complete");
}

TEST_CASE("criterion 4 equioscillation") {
  Criterion c("4 (equioscillation suite)");
  const char* fns[] = {"cos", "exp", "ln(1 + x)", "atan"};
  for (const char* fn : fns) {
    FunctionOracle f = make_oracle(fn);
    for (unsigned n = 2; n <= 6; ++n) {
      MinimaxResult r = minimax(f, Rational(1), n);
      if (r.alternation.size() != n + 2) {
        c.check(false, std::string(fn) + " n=" + std::to_string(n) + ": expected " +
                           std::to_string(n + 2) + " alternation points");
        continue;
      }
      double eps = r.epsilon.mid().to_double();
      for (std::size_t i = 0; i < r.alternation.size(); ++i) {
        double mag = std::abs(r.alternation[i].second.to_double());
        if (std::abs(mag - eps) > 1e-8 * eps)
          c.check(false, std::string(fn) + " n=" + std::to_string(n) +
                             ": extremum magnitude off by more than 1e-8 relative");
        if (i > 0) {
          if (!(r.alternation[i - 1].first < r.alternation[i].first))
            c.check(false, std::string(fn) + " n=" + std::to_string(n) +
                               ": alternation abscissae not increasing");
          if (r.alternation[i - 1].second.sign() * r.alternation[i].second.sign() != -1)
            c.check(false, std::string(fn) + " n=" + std::to_string(n) +
                               ": alternation signs do not alternate");
        }
      }
    }
  }
  c.check(true, "equioscillation battery complete");
}

TEST_CASE("criterion 5 box soundness") {
  Criterion c("5 (coefficient-box soundness)");
  struct Instance {
    const char* fn;
    Rational a;
    std::vector<long> bits;
  };
  const Instance instances[] = {
      {"cos", Rational(1, 2), {8, 6, 5}},     {"exp", Rational(1, 4), {9, 7, 5}},
      {"ln(1 + x)", Rational(1, 2), {8, 6}},  {"atan", Rational(1), {7, 6, 5}},
      {"exp", Rational(1, 2), {6, 5}},        {"cos", Rational(1), {8, 7, 6}},
      {"sinh(x)", Rational(1, 2), {7, 6, 5}}, {"cos", Rational(1, 2), {10, 8, 7}},
      {"exp", Rational(1, 4), {11, 9, 7}},    {"ln(1 + x)", Rational(1, 4), {10, 8}},
      {"atan", Rational(1, 2), {9, 8, 7}},    {"exp", Rational(1), {9, 8, 7, 6}},
      {"cos", Rational(3, 4), {9, 8, 6}},     {"sinh(x)", Rational(1), {8, 7, 6}},
      {"exp", Rational(3, 4), {8, 7, 6}},     {"ln(1 + x)", Rational(1), {9, 7, 6}},
      {"atan", Rational(3, 4), {8, 7, 6}},    {"cos", Rational(1, 4), {11, 9, 7}},
      {"exp", Rational(1, 2), {10, 9, 8}},    {"cos", Rational(1), {10, 9, 8, 7}},
      {"atan", Rational(1), {9, 8, 7, 6}},    {"ln(1 + x)", Rational(1, 2), {10, 9, 8}},
      {"sinh(x)", Rational(3, 4), {9, 8, 7}}, {"exp", Rational(1, 4), {12, 10, 8}},
  };
  int qualifying = 0;
  int violations = 0;
  for (const auto& inst : instances) {
    FunctionOracle f = make_oracle(inst.fn);
    BitBudget bits{inst.bits};
    unsigned n = static_cast<unsigned>(bits.size() - 1);
    MinimaxResult mm = minimax(f, inst.a, n);
    SupNormOptions tight;
    tight.tol_bits = 96;
    Enclosure eps = sup_norm(f, mm.p, inst.a, tight).value;
    Polynomial hatp = naive_round(mm.p, bits);
    Enclosure eps_hat = sup_norm(f, hatp, inst.a, tight).value;
    if (eps_hat.hi().is_zero()) continue;
    Rational lambda(1);
    CandidateBox box = chebyshev_box(mm.p, eps, eps_hat, lambda, inst.a, bits);
    Rational lam_eps_lo = lambda * eps_hat.lo().to_rational();
    Rational lam_eps_hi = lambda * eps_hat.hi().to_rational();

    // Sweep a strictly wider region than the box so qualifying polynomials
    // outside it would be caught; a grid lower bound prefilters the sweep.
    CandidateBox wide = box;
    for (unsigned i = 0; i <= n; ++i) {
      wide.lo[i] -= Int(2);
      wide.hi[i] += Int(2);
    }
    if (wide.total() > Int(20000)) continue;

    std::vector<Rational> pts;
    std::vector<Enclosure> fvals;
    for (int j = 0; j <= 16; ++j) {
      Rational x = inst.a * Rational(j, 16);
      fvals.push_back(eval_enclosure(f.expr, x, 160));
      pts.push_back(std::move(x));
    }

    std::vector<Int> tuple = wide.lo;
    for (;;) {
      std::vector<Rational> coeffs(n + 1);
      for (unsigned i = 0; i <= n; ++i) coeffs[i] = Rational::dyadic(tuple[i], -bits[i]);
      Polynomial q(coeffs);
      bool maybe = true;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        Rational v = q.eval(pts[j]);
        if (v > fvals[j].hi().to_rational() + lam_eps_hi ||
            v < fvals[j].lo().to_rational() - lam_eps_hi) {
          maybe = false;  // certainly worse than lambda*eps_hat somewhere
          break;
        }
      }
      if (maybe) {
        NormResult nq = sup_norm(f, q, inst.a);
        if (nq.value.hi().to_rational() <= lam_eps_lo) {
          ++qualifying;
          if (!box.contains(tuple)) ++violations;
        }
      }
      std::size_t k = n + 1;
      bool wrapped = true;
      while (k-- > 0) {
        ++tuple[k];
        if (tuple[k] <= wide.hi[k]) {
          wrapped = false;
          break;
        }
        tuple[k] = wide.lo[k];
      }
      if (wrapped) break;
    }
  }
  c.check(qualifying >= 100,
          "needed 100 qualifying on-grid polynomials, found " + std::to_string(qualifying));
  c.check(violations == 0,
          std::to_string(violations) + " qualifying polynomials fell outside the box");
}

TEST_CASE("criterion 6 oracle equivalence") {
  Criterion c("6 (search vs brute force)");
  std::mt19937_64 rng(6066);
  std::uniform_int_distribution<int> fn_pick(0, 3);
  std::uniform_int_distribution<long> bit_pick(2, 6);
  std::uniform_int_distribution<long> aden(1, 4);
  std::uniform_int_distribution<long> radius(2, 4);
  const char* fns[] = {"exp", "cos", "ln(1 + x)", "atan"};
  int done = 0;
  for (int t = 0; done < 25 && t < 200; ++t) {
    FunctionOracle f = make_oracle(fns[fn_pick(rng)]);
    Rational a(1, aden(rng));
    unsigned n = (t % 2) ? 1 : 2;
    BitBudget bits;
    for (unsigned i = 0; i <= n; ++i) bits.bits.push_back(bit_pick(rng));
    MinimaxResult mm;
    try {
      mm = minimax(f, a, n);
    } catch (const Error&) {
      continue;
    }
    Polynomial hatp = naive_round(mm.p, bits);
    CandidateBox box;
    box.bits = bits;
    long r = radius(rng);
    for (unsigned i = 0; i <= n; ++i) {
      Int cc = hatp.coeff(i).mul_2exp(bits[i]).numerator();
      box.lo.push_back(cc - Int(r));
      box.hi.push_back(cc + Int(r));
    }
    if (box.total() > Int(10000)) continue;

    Real lam(Rational(1000000), 128);
    SearchResult fast = best_truncated(f, a, box, ConstraintSet{}, lam, SearchOptions{});
    SearchResult slow = brute_force_oracle(f, a, bits, box);
    if (!(fast.found && slow.found && fast.tuple == slow.tuple)) {
      c.check(false, "argmin tuples differ on instance " + std::to_string(done));
    } else {
      double gap = std::abs(fast.error.mid().to_double() - slow.error.mid().to_double());
      double widths = fast.error.width().to_double() + slow.error.width().to_double();
      if (!(gap <= widths))
        c.check(false, "errors disagree beyond combined widths on instance " +
                           std::to_string(done));
    }
    ++done;
  }
  c.check(done == 25, "generated " + std::to_string(done) + " of 25 instances");
}

TEST_CASE("criterion 7 parallel determinism") {
  Criterion c("7 (parallel determinism)");
  auto coefficient_signature = [](const Report& r) {
    std::string sig;
    for (const auto& s : r.minimax_coefficients) sig += s + "|";
    for (const auto& h : r.hatp) sig += h.fraction + "|" + h.numerator + "|";
    sig += r.box.total + "|";
    for (const auto& d : r.box.degrees) sig += d.lo_int + ":" + d.hi_int + "|";
    if (r.refined) {
      sig += r.refined_box.total + "|";
      for (const auto& d : r.refined_box.degrees) sig += d.lo_int + ":" + d.hi_int + "|";
    }
    for (const auto& p : r.pstar) sig += p.fraction + "|" + p.numerator + "|";
    sig += r.pstar_error.lo + "|" + r.pstar_error.hi + "|";
    return sig;
  };

  std::string cos_sig, exp_sig;
  for (int workers : {1, 2, 8}) {
    Report rc, re;
    run_seconds(cos_config(workers), &rc);
    run_seconds(exp_config(workers), &re);
    std::string sc = coefficient_signature(rc);
    std::string se = coefficient_signature(re);
    if (workers == 1) {
      cos_sig = sc;
      exp_sig = se;
    } else {
      c.check(sc == cos_sig,
              "cosine coefficient output differs at workers=" + std::to_string(workers));
      c.check(se == exp_sig,
              "exponential coefficient output differs at workers=" + std::to_string(workers));
    }
  }
  c.check(!cos_sig.empty() && !exp_sig.empty(), "signatures recorded");
}
