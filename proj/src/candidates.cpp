#include "polstar/candidates.hpp"

#include "polstar/chebyshev.hpp"
#include "polstar/errors.hpp"
#include "polstar/rounding.hpp"
#include "polstar/simplex.hpp"

namespace polstar {

CandidateBox CandidateBox::empty_box(const BitBudget& bits) {
  CandidateBox box;
  box.bits = bits;
  box.lo.assign(bits.size(), Int(1));
  box.hi.assign(bits.size(), Int(0));
  return box;
}

bool CandidateBox::empty() const {
  if (lo.empty()) return true;
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (lo[i] > hi[i]) return true;
  return false;
}

std::vector<Int> CandidateBox::counts() const {
  std::vector<Int> out(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    Int c = hi[i] - lo[i] + Int(1);
    out[i] = c.sign() > 0 ? c : Int(0);
  }
  return out;
}

Int CandidateBox::total() const {
  Int t(1);
  for (const Int& c : counts()) t *= c;
  return t;
}

bool CandidateBox::contains(const std::vector<Int>& tuple) const {
  if (tuple.size() != lo.size()) return false;
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (tuple[i] < lo[i] || tuple[i] > hi[i]) return false;
  return true;
}

Polynomial naive_round(const Polynomial& p, const BitBudget& bits) {
  if (p.degree() + 1 > bits.size())
    throw ConfigError("naive_round: polynomial degree exceeds the bit budget");
  std::vector<Rational> out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) out[i] = round_to_multiple(p.coeff(i), bits[i]);
  return Polynomial(std::move(out));
}

Rational dyadic_below(const Rational& x, long rel_bits) {
  if (x.sign() <= 0) throw DomainError("dyadic_below: requires a positive value");
  // A dyadic value is its own selection (gap zero).
  if (mpz_popcount(x.denominator().raw()) == 1) return x;
  Real approx(x, 64, MPFR_RNDD);
  long e = static_cast<long>(mpfr_get_exp(approx.raw()));
  long k = rel_bits + std::max(0L, 1 - e);
  return Rational::dyadic(floor_scaled(x, k), -k);
}

Rational dyadic_below(const Enclosure& x, long rel_bits) {
  if (x.lo().sign() <= 0) throw DomainError("dyadic_below: requires a positive enclosure");
  return dyadic_below(x.lo().to_rational(), rel_bits);
}

CandidateBox chebyshev_box(const Polynomial& p, const Enclosure& epsilon,
                           const Enclosure& epsilon_hat, const Rational& lambda,
                           const Rational& a, const BitBudget& bits) {
  if (bits.size() == 0) throw ConfigError("chebyshev_box: empty bit budget");
  if (epsilon_hat.hi().sign() <= 0)
    throw DomainError("chebyshev_box: epsilon_hat must be nonzero");
  if (lambda.sign() <= 0 || lambda > Rational(1))
    throw ConfigError("chebyshev_box: lambda must lie in (0, 1]");
  // lambda below epsilon/epsilon_hat leaves no feasible target; flag it when
  // the enclosures make it certain.
  if (lambda * epsilon_hat.hi().to_rational() < epsilon.lo().to_rational())
    throw ConfigError("chebyshev_box: lambda is certainly below epsilon/epsilon_hat");

  const unsigned n = static_cast<unsigned>(bits.size() - 1);
  BetaVector beta = beta_vector(n, a);
  // Outward: the enclosure uppers can only enlarge the box.
  Rational s = epsilon.hi().to_rational() + lambda * epsilon_hat.hi().to_rational();

  CandidateBox box;
  box.bits = bits;
  box.lo.resize(bits.size());
  box.hi.resize(bits.size());
  for (std::size_t i = 0; i <= n; ++i) {
    Rational half = s * beta.betas[i].abs();
    box.lo[i] = ceil_scaled(p.coeff(i) - half, bits[i]);
    box.hi[i] = floor_scaled(p.coeff(i) + half, bits[i]);
  }
  return box;
}

ConstraintSet sampled_constraints(const FunctionOracle& f, const Rational& a, long d,
                                  const Rational& lambda, const Enclosure& epsilon_hat,
                                  const BitBudget& bits, mpfr_prec_t prec) {
  if (d < 1) throw ConfigError("sampled_constraints: d must be at least 1");
  ConstraintSet cs;
  cs.A = dyadic_below(a);
  cs.d = d;
  cs.lambda = lambda;
  cs.epsilon_hat = epsilon_hat;

  Rational band = lambda * epsilon_hat.hi().to_rational();
  const std::size_t n = bits.size();
  for (long j = 0; j <= d; ++j) {
    Rational x = cs.A * Rational(j, d);
    Enclosure fx = eval_enclosure(f.expr, x, prec);
    ConstraintRow row;
    row.coeff.resize(n);
    Rational xp(1);
    for (std::size_t i = 0; i < n; ++i) {
      row.coeff[i] = xp.mul_2exp(-bits[i]);
      xp *= x;
    }
    row.lower = fx.lo().to_rational() - band;
    row.upper = fx.hi().to_rational() + band;
    cs.rows.push_back(std::move(row));
    cs.sample_points.push_back(std::move(x));
  }
  return cs;
}

CandidateBox lp_tighten(const CandidateBox& box, const ConstraintSet& cs, TightenDebug* debug) {
  if (box.empty()) return CandidateBox::empty_box(box.bits);
  if (cs.empty()) return box;
  const std::size_t n = box.lo.size();

  // Variables y_i = c_i - lo_i >= 0 with y_i <= hi_i - lo_i, plus two rows
  // per sampled band.
  LinearProgram lp;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> row(n);
    row[i] = Rational(1);
    lp.A.push_back(std::move(row));
    lp.b.push_back(Rational(box.hi[i] - box.lo[i]));
  }
  for (const ConstraintRow& row : cs.rows) {
    if (row.coeff.size() != n) throw ConfigError("lp_tighten: constraint arity mismatch");
    Rational at_lo(0);
    for (std::size_t i = 0; i < n; ++i) at_lo += row.coeff[i] * Rational(box.lo[i]);
    lp.A.push_back(row.coeff);
    lp.b.push_back(row.upper - at_lo);
    std::vector<Rational> neg(n);
    for (std::size_t i = 0; i < n; ++i) neg[i] = -row.coeff[i];
    lp.A.push_back(std::move(neg));
    lp.b.push_back(at_lo - row.lower);
  }

  CandidateBox out;
  out.bits = box.bits;
  out.lo.resize(n);
  out.hi.resize(n);
  if (debug) {
    debug->min_vertex.assign(n, {});
    debug->max_vertex.assign(n, {});
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (int dir = 0; dir < 2; ++dir) {
      lp.c.assign(n, Rational(0));
      lp.c[i] = dir == 0 ? Rational(-1) : Rational(1);  // min then max of c_i
      LpSolution sol = solve_lp(lp);
      if (sol.status == LpStatus::Infeasible) return CandidateBox::empty_box(box.bits);
      if (sol.status != LpStatus::Optimal)
        throw Error("lp_tighten: unexpected unbounded polytope");
      Rational value = Rational(box.lo[i]) + (dir == 0 ? -sol.objective : sol.objective);
      if (dir == 0)
        out.lo[i] = value.ceil();
      else
        out.hi[i] = value.floor();
      if (debug) {
        std::vector<Rational> vertex(n);
        for (std::size_t k = 0; k < n; ++k) vertex[k] = Rational(box.lo[k]) + sol.x[k];
        (dir == 0 ? debug->min_vertex : debug->max_vertex)[i] = std::move(vertex);
      }
    }
  }
  return out;
}

}  // namespace polstar
