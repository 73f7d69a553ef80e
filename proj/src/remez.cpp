#include "polstar/remez.hpp"

#include <algorithm>

#include "polstar/errors.hpp"

namespace polstar {

namespace {

/// Exact Gaussian elimination with magnitude pivoting; rows is modified.
/// Returns the solution of the square augmented system, or throws.
std::vector<Rational> solve_linear(std::vector<std::vector<Rational>> rows) {
  const std::size_t n = rows.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    double best = -1;
    for (std::size_t r = col; r < n; ++r) {
      if (rows[r][col].is_zero()) continue;
      double mag = std::abs(rows[r][col].to_double());
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (rows[pivot][col].is_zero())
      throw ConvergenceError("minimax: singular reference system");
    std::swap(rows[col], rows[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (rows[r][col].is_zero()) continue;
      Rational factor = rows[r][col] / rows[col][col];
      for (std::size_t c = col; c <= n; ++c) rows[r][c] -= factor * rows[col][c];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t r = n; r-- > 0;) {
    Rational acc = rows[r][n];
    for (std::size_t c = r + 1; c < n; ++c) acc -= rows[r][c] * x[c];
    x[r] = acc / rows[r][r];
  }
  return x;
}

struct AltPoint {
  Rational x;
  Real v;
  int sign;
};

/// Compresses sign groups (keeping the largest |v| per group), then trims to
/// exactly want points while preserving alternation.
std::vector<AltPoint> select_alternation(std::vector<AltPoint> pts, std::size_t want) {
  std::vector<AltPoint> grouped;
  for (auto& p : pts) {
    if (p.sign == 0) continue;
    if (!grouped.empty() && grouped.back().sign == p.sign) {
      if (p.v.abs() > grouped.back().v.abs()) grouped.back() = std::move(p);
    } else {
      grouped.push_back(std::move(p));
    }
  }
  while (grouped.size() > want) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < grouped.size(); ++i)
      if (grouped[i].v.abs() < grouped[k].v.abs()) k = i;
    if (k == 0) {
      grouped.erase(grouped.begin());
    } else if (k + 1 == grouped.size()) {
      grouped.pop_back();
    } else {
      // Remove the weakest point and its weaker neighbour; the remaining
      // neighbours alternate again.
      std::size_t other = grouped[k - 1].v.abs() < grouped[k + 1].v.abs() ? k - 1 : k + 1;
      std::size_t first = std::min(k, other);
      grouped.erase(grouped.begin() + static_cast<std::ptrdiff_t>(first),
                    grouped.begin() + static_cast<std::ptrdiff_t>(first) + 2);
    }
  }
  return grouped;
}

}  // namespace

MinimaxResult minimax(const FunctionOracle& f, const Rational& a, unsigned n,
                      const RemezOptions& opts) {
  if (a.sign() <= 0) throw DomainError("minimax: interval endpoint must be positive");
  const std::size_t points = n + 2;
  mpfr_prec_t sample_prec = Real::clamp(opts.prec);
  Real tol = Real(1L, 64).mul_2exp(-opts.tol_bits);

  // Mapped Chebyshev extrema of [0, a] as the initial reference.
  std::vector<Rational> ref(points);
  ref[0] = Rational(0);
  ref[points - 1] = a;
  {
    Enclosure pi = enc_pi(128);
    for (std::size_t i = 1; i + 1 < points; ++i) {
      Enclosure c = enc_cos(pi * Enclosure(Rational(static_cast<long>(i),
                                                    static_cast<long>(points - 1)),
                                           128));
      Rational t = c.mid().to_rational();
      ref[i] = a * (Rational(1) - t).mul_2exp(-1);
    }
  }

  MinimaxResult result;
  std::size_t grid_boost = 0;

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    // Midpoint-rationalized samples; exact alternating solve.
    std::vector<std::vector<Rational>> rows(points, std::vector<Rational>(points + 1));
    for (std::size_t i = 0; i < points; ++i) {
      Rational y = eval_enclosure(f.expr, ref[i], sample_prec).mid().to_rational();
      Rational xp(1);
      for (std::size_t j = 0; j <= n; ++j) {
        rows[i][j] = xp;
        xp *= ref[i];
      }
      rows[i][n + 1] = (i % 2 == 0) ? Rational(-1) : Rational(1);  // -(-1)^i E
      rows[i][points] = y;
    }
    std::vector<Rational> sol = solve_linear(std::move(rows));
    Rational levelled = sol[n + 1].abs();

    // Guard against sample noise swamping the levelled error.
    if (!levelled.is_zero() &&
        levelled < Rational(1).mul_2exp(-static_cast<long>(sample_prec / 2))) {
      sample_prec *= 2;
      if (sample_prec > 1 << 15)
        throw ConvergenceError("minimax: levelled error below sample resolution");
      --iter;
      continue;
    }

    result.p = Polynomial(std::vector<Rational>(sol.begin(), sol.begin() + n + 1));
    result.levelled_errors.push_back(levelled);
    result.iterations = iter;

    SupNormOptions normopts;
    normopts.tol_bits = opts.tol_bits + 2;
    normopts.prec = sample_prec;
    normopts.refine_all_extrema = true;
    normopts.grid = std::max<std::size_t>(64, 32 * (n + 1)) << grid_boost;
    NormResult norm = sup_norm(f, result.p, a, normopts);
    result.epsilon = norm.value;

    // Exact fit: nothing to oscillate.
    if (norm.value.hi().is_zero()) {
      result.alternation.clear();
      for (const Rational& x : ref)
        result.alternation.emplace_back(x, Real(0L, sample_prec));
      return result;
    }

    std::vector<AltPoint> cands;
    cands.reserve(norm.extrema.size());
    for (const auto& [x, v] : norm.extrema) cands.push_back({x, v, v.sign()});
    std::vector<AltPoint> sel = select_alternation(std::move(cands), points);
    if (sel.size() < points) {
      if (grid_boost < 4) {
        ++grid_boost;
        --iter;
        continue;
      }
      throw ConvergenceError("minimax: could not locate enough alternation points");
    }

    Real minv = sel[0].v.abs();
    for (const auto& p : sel) minv = Real::min(minv, p.v.abs());
    result.alternation.clear();
    for (const auto& p : sel) result.alternation.emplace_back(p.x, p.v);

    // Converged when every selected extremum is within tol of the certified sup.
    if (norm.value.hi() - minv <= tol * norm.value.hi()) return result;

    // Multi-point exchange; fall back to injecting only the witness if the
    // levelled error ever regressed.
    std::vector<Rational> next(sel.size());
    for (std::size_t i = 0; i < sel.size(); ++i) next[i] = sel[i].x;
    std::size_t k = result.levelled_errors.size();
    if (k >= 2 && result.levelled_errors[k - 1] < result.levelled_errors[k - 2]) {
      std::vector<AltPoint> merged;
      for (const Rational& x : ref) {
        Enclosure ex = eval_enclosure(f.expr, x, sample_prec) -
                       Enclosure(result.p.eval(x), sample_prec);
        merged.push_back({x, ex.mid(), ex.mid().sign()});
      }
      Enclosure ew = eval_enclosure(f.expr, norm.witness, sample_prec) -
                     Enclosure(result.p.eval(norm.witness), sample_prec);
      merged.push_back({norm.witness, ew.mid(), ew.mid().sign()});
      std::sort(merged.begin(), merged.end(),
                [](const AltPoint& p1, const AltPoint& p2) { return p1.x < p2.x; });
      std::vector<AltPoint> single = select_alternation(std::move(merged), points);
      if (single.size() == points) {
        next.resize(points);
        for (std::size_t i = 0; i < points; ++i) next[i] = single[i].x;
      }
    }
    ref = std::move(next);
  }
  throw ConvergenceError("minimax: exchange did not converge within the iteration budget");
}

}  // namespace polstar
