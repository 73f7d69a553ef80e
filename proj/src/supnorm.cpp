#include "polstar/supnorm.hpp"

#include <algorithm>
#include <deque>

#include "polstar/errors.hpp"

namespace polstar {

std::optional<Enclosure> SupNormCache::find(bool deriv, const Rational& x,
                                            mpfr_prec_t prec) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = map_.find({deriv, static_cast<long>(prec), x.str()});
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void SupNormCache::store(bool deriv, const Rational& x, mpfr_prec_t prec, const Enclosure& v) {
  std::lock_guard<std::mutex> lock(mu_);
  map_.insert({{deriv, static_cast<long>(prec), x.str()}, v});
}

namespace {

struct Region {
  Rational l, r;
  int sl = 0, sr = 0;  // certified signs of e' at the ends (0 = unknown)
  Enclosure val;       // enclosure of e over [l, r]
  bool done = false;
};

class NormSolver {
 public:
  NormSolver(const FunctionOracle& f, const Polynomial& q, const Rational& a,
             const SupNormOptions& opts)
      : f_(f), q_(q), dq_(q.derivative()), a_(a), opts_(opts) {}

  NormResult run() {
    std::size_t deg = q_.stored_degree();
    std::size_t n = opts_.grid ? opts_.grid : std::max<std::size_t>(64, 32 * (deg + 1));
    mpfr_prec_t wp = Real::clamp(opts_.prec);
    for (int attempt = 0; attempt < opts_.max_attempts; ++attempt) {
      NormResult out;
      if (run_attempt(wp, n, &out)) return out;
      wp *= 2;
      n *= 2;
    }
    throw PrecisionError("sup_norm: unresolved norm after precision escalation");
  }

 private:
  Enclosure f_point(const Rational& x, mpfr_prec_t wp, bool use_cache) {
    if (use_cache && opts_.cache) {
      if (auto hit = opts_.cache->find(false, x, wp)) return *hit;
    }
    Enclosure v = eval_interval(f_.expr, Enclosure(x, wp), wp);
    if (use_cache && opts_.cache) opts_.cache->store(false, x, wp, v);
    return v;
  }

  Enclosure e_point(const Rational& x, mpfr_prec_t wp, bool use_cache) {
    return f_point(x, wp, use_cache) - Enclosure(q_.eval(x), wp);
  }

  Enclosure de_point(const Rational& x, mpfr_prec_t wp, bool use_cache) {
    Enclosure dfx = [&] {
      if (use_cache && opts_.cache) {
        if (auto hit = opts_.cache->find(true, x, wp)) return *hit;
      }
      Enclosure v = eval_interval(f_.derivative, Enclosure(x, wp), wp);
      if (use_cache && opts_.cache) opts_.cache->store(true, x, wp, v);
      return v;
    }();
    return dfx - Enclosure(dq_.eval(x), wp);
  }

  Enclosure e_range(const Rational& l, const Rational& r, mpfr_prec_t wp) {
    Enclosure x(l, r, wp);
    return eval_interval(f_.expr, x, wp) - q_.eval(x, wp);
  }

  /// Records a point evaluation into the running lower/upper tracking.
  /// Returns false when the give-up bound is exceeded.
  bool consider(const Rational& x, const Enclosure& ex, Real* lower, Rational* witness,
                Real* upoints) {
    Enclosure mag = ex.abs_enclosure();
    if (mag.lo() > *lower) {
      *lower = mag.lo();
      *witness = x;
    }
    if (mag.hi() > *upoints) *upoints = mag.hi();
    if (opts_.give_up_above &&
        mpfr_cmp_q(lower->raw(), opts_.give_up_above->raw()) > 0)
      return false;
    return true;
  }

  bool run_attempt(mpfr_prec_t wp, std::size_t n, NormResult* out) {
    Real tol = Real(1L, wp).mul_2exp(-opts_.tol_bits);
    Real lower(0L, wp), upoints(0L, wp);
    Rational witness(0);

    // Grid pass: certified values at a*j/n.
    std::vector<Rational> xs(n + 1);
    std::vector<Enclosure> es(n + 1, Enclosure::zero(wp));
    for (std::size_t j = 0; j <= n; ++j) {
      xs[j] = a_ * Rational(static_cast<long>(j), static_cast<long>(n));
      es[j] = e_point(xs[j], wp, true);
      if (!consider(xs[j], es[j], &lower, &witness, &upoints)) {
        *out = abort_result(lower, witness, wp);
        return true;
      }
    }

    // Derivative signs; undecided or flipping signs open candidate regions.
    std::vector<int> sg(n + 1);
    for (std::size_t j = 0; j <= n; ++j) sg[j] = de_point(xs[j], wp, true).sign();

    std::deque<Region> regions;
    for (std::size_t j = 0; j < n; ++j) {
      if (sg[j] * sg[j + 1] < 0 || sg[j] == 0 || sg[j + 1] == 0) {
        Region reg;
        reg.l = xs[j];
        reg.r = xs[j + 1];
        reg.sl = sg[j];
        reg.sr = sg[j + 1];
        reg.val = e_range(reg.l, reg.r, wp);
        regions.push_back(std::move(reg));
      }
    }

    const std::size_t region_cap = 4096;
    const std::size_t budget =
        512 + 32 * static_cast<std::size_t>(opts_.tol_bits) * (regions.size() + 2);

    auto global_upper = [&]() {
      Real u = upoints;
      for (const Region& reg : regions) {
        Real rh = reg.val.abs_enclosure().hi();
        if (rh > u) u = rh;
      }
      return u;
    };
    auto converged = [&](const Real& u) {
      if (u.is_zero()) return true;
      if (u - lower > tol * u) return false;
      if (!opts_.refine_all_extrema) return true;
      for (const Region& reg : regions)
        if (!reg.done) return false;
      return true;
    };
    auto mark_done = [&](Region& reg, const Real& u) {
      Enclosure mag = reg.val.abs_enclosure();
      reg.done = mag.hi() - mag.lo() <= tol * u;
    };

    for (std::size_t step = 0; step < budget; ++step) {
      Real u = global_upper();
      for (Region& reg : regions) mark_done(reg, u);
      if (converged(u)) {
        *out = assemble(lower, u, witness, regions, xs, es, wp);
        return true;
      }
      // Refine the not-yet-done region with the largest upper bound.
      std::size_t pick = regions.size();
      Real pick_hi(0L, wp);
      for (std::size_t i = 0; i < regions.size(); ++i) {
        if (regions[i].done) continue;
        Real rh = regions[i].val.abs_enclosure().hi();
        if (pick == regions.size() || rh > pick_hi) {
          pick = i;
          pick_hi = rh;
        }
      }
      if (pick == regions.size()) return false;  // cannot make progress: escalate
      if (regions.size() > region_cap) return false;

      Region reg = std::move(regions[pick]);
      regions.erase(regions.begin() + static_cast<std::ptrdiff_t>(pick));
      Rational m = (reg.l + reg.r).mul_2exp(-1);
      Enclosure em = e_point(m, wp, false);
      if (!consider(m, em, &lower, &witness, &upoints)) {
        *out = abort_result(lower, witness, wp);
        return true;
      }
      int sm = de_point(m, wp, false).sign();

      auto push = [&](const Rational& l, const Rational& r, int sl, int sr) {
        Region sub;
        sub.l = l;
        sub.r = r;
        sub.sl = sl;
        sub.sr = sr;
        sub.val = e_range(sub.l, sub.r, wp);
        regions.push_back(std::move(sub));
      };
      if (sm != 0 && reg.sl != 0 && sm * reg.sl < 0) {
        push(reg.l, m, reg.sl, sm);
      } else if (sm != 0 && reg.sr != 0 && sm * reg.sr < 0) {
        push(m, reg.r, sm, reg.sr);
      } else if (sm != 0 && reg.sl != 0 && reg.sr != 0) {
        // Certified equal signs at l, m, r: monotone on both halves (same
        // assumption as the grid cells), and the endpoint values are already
        // in the point tracking. Retire the region.
      } else {
        // An undecided sign remains: keep both halves; brackets re-certify
        // or the range widths shrink below the retirement criterion.
        push(reg.l, m, reg.sl, sm);
        push(m, reg.r, sm, reg.sr);
      }
    }
    return false;  // budget exhausted: escalate
  }

  NormResult abort_result(const Real& lower, const Rational& witness, mpfr_prec_t wp) {
    NormResult out;
    Real inf(wp);
    mpfr_set_inf(inf.raw(), 1);
    out.value = Enclosure(lower, inf);
    out.witness = witness;
    out.aborted = true;
    return out;
  }

  NormResult assemble(const Real& lower, const Real& upper, const Rational& witness,
                      const std::deque<Region>& regions, const std::vector<Rational>& xs,
                      const std::vector<Enclosure>& es, mpfr_prec_t wp) {
    NormResult out;
    out.value = Enclosure(Real::min(lower, upper), upper);
    out.witness = witness;
    out.extrema.emplace_back(xs.front(), es.front().mid());
    for (const Region& reg : regions) {
      Rational m = (reg.l + reg.r).mul_2exp(-1);
      out.extrema.emplace_back(m, e_point(m, wp, false).mid());
    }
    out.extrema.emplace_back(xs.back(), es.back().mid());
    std::sort(out.extrema.begin(), out.extrema.end(),
              [](const auto& p1, const auto& p2) { return p1.first < p2.first; });
    return out;
  }

  const FunctionOracle& f_;
  const Polynomial& q_;
  Polynomial dq_;
  Rational a_;
  SupNormOptions opts_;
};

}  // namespace

NormResult sup_norm(const FunctionOracle& f, const Polynomial& q, const Rational& a,
                    const SupNormOptions& opts) {
  if (a.sign() <= 0) throw DomainError("sup_norm: interval endpoint must be positive");
  // An exactly-representable f with f - q == 0 cannot be certified by
  // interval sampling alone; decide it structurally.
  if (auto fp = as_polynomial(f.expr)) {
    if ((*fp - q).is_zero()) {
      mpfr_prec_t wp = Real::clamp(opts.prec);
      NormResult out;
      out.value = Enclosure::zero(wp);
      out.witness = Rational(0);
      out.extrema.emplace_back(Rational(0), Real(0L, wp));
      out.extrema.emplace_back(a, Real(0L, wp));
      return out;
    }
  }
  return NormSolver(f, q, a, opts).run();
}

Real grid_lower_bound(const FunctionOracle& f, const Polynomial& q,
                      const std::vector<Rational>& points, mpfr_prec_t prec,
                      SupNormCache* cache) {
  mpfr_prec_t wp = Real::clamp(prec);
  Real best(0L, wp);
  for (const Rational& x : points) {
    Enclosure fx = [&] {
      if (cache) {
        if (auto hit = cache->find(false, x, wp)) return *hit;
      }
      Enclosure v = eval_interval(f.expr, Enclosure(x, wp), wp);
      if (cache) cache->store(false, x, wp, v);
      return v;
    }();
    Enclosure e = fx - Enclosure(q.eval(x), wp);
    Real lo = e.abs_enclosure().lo();
    if (lo > best) best = lo;
  }
  return best;
}

}  // namespace polstar
