#include "polstar/search.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "polstar/errors.hpp"

namespace polstar {

namespace {

bool lex_less(const std::vector<Int>& a, const std::vector<Int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return false;
}

Polynomial tuple_polynomial(const CandidateBox& box, const std::vector<Int>& tuple) {
  std::vector<Rational> c(tuple.size());
  for (std::size_t i = 0; i < tuple.size(); ++i) c[i] = box.coeff_value(i, tuple[i]);
  return Polynomial(std::move(c));
}

/// One two-sided row over the scaled coefficients with per-level suffix
/// contribution ranges for whole-subtree pruning.
struct Row {
  std::vector<Rational> coeff;
  Rational lower, upper;  // static rows only
  bool band = false;      // band rows derive bounds from the running error bound
  Rational f_lo, f_hi;    // band rows: rational bounds of f(x)
  std::vector<Rational> suffix_min, suffix_max;

  void build_suffixes(const CandidateBox& box) {
    const std::size_t n = coeff.size();
    suffix_min.assign(n + 1, Rational(0));
    suffix_max.assign(n + 1, Rational(0));
    for (std::size_t i = n; i-- > 0;) {
      Rational at_lo = coeff[i] * Rational(box.lo[i]);
      Rational at_hi = coeff[i] * Rational(box.hi[i]);
      const Rational& mn = at_lo <= at_hi ? at_lo : at_hi;
      const Rational& mx = at_lo <= at_hi ? at_hi : at_lo;
      suffix_min[i] = mn + suffix_min[i + 1];
      suffix_max[i] = mx + suffix_max[i + 1];
    }
  }
};

using RowBounds = std::vector<std::pair<Rational, Rational>>;

struct Evaluated {
  std::vector<Int> tuple;
  Polynomial poly;
  Enclosure error;
};

class Searcher {
 public:
  Searcher(const FunctionOracle& f, const Rational& a, const CandidateBox& box,
           const ConstraintSet& cs, const Real& lambda_bound, const SearchOptions& opts)
      : f_(f), a_(a), box_(box), cs_(cs), lambda_bound_(lambda_bound), opts_(opts) {
    n_ = box.lo.size();
    norm_prec_ = pick_norm_precision();
    counts_ = box.counts();
    subtree_sizes_.assign(n_ + 1, 1.0);
    for (std::size_t i = n_; i-- > 0;)
      subtree_sizes_[i] = subtree_sizes_[i + 1] * counts_[i].to_double();
  }

  SearchResult run() {
    if (box_.empty()) throw ConfigError("best_truncated: empty candidate box");
    build_rows(/*with_constraints=*/true);
    SearchResult result = two_pass();
    if (!result.found && !cs_.empty()) {
      // No tuple satisfied the rows: advisory box-only rescan.
      build_rows(/*with_constraints=*/false);
      result = two_pass();
      result.constraints_infeasible = true;
    }
    if (result.found) {
      // Deterministic reported enclosure, independent of comparison history.
      SupNormOptions nopts;
      nopts.tol_bits = opts_.tol_bits + 8;
      nopts.prec = norm_prec_;
      nopts.cache = &cache_;
      result.error = sup_norm(f_, result.pstar, a_, nopts).value;
      Rational bound = lambda_bound_.to_rational() *
                       (Rational(1) + Rational(1).mul_2exp(-opts_.tol_bits));
      result.feasible =
          !result.constraints_infeasible && result.error.hi().to_rational() <= bound;
    }
    return result;
  }

 private:
  mpfr_prec_t pick_norm_precision() {
    // Errors live at the lambda*eps_hat scale; leave tolerance to spare.
    long scale_bits = 0;
    if (lambda_bound_.is_finite() && lambda_bound_.sign() > 0)
      scale_bits = std::max(0L, -static_cast<long>(mpfr_get_exp(lambda_bound_.raw())));
    return Real::clamp(std::max<mpfr_prec_t>(opts_.prec, scale_bits + opts_.tol_bits + 32));
  }

  void build_rows(bool with_constraints) {
    rows_.clear();
    if (with_constraints) {
      for (const ConstraintRow& r : cs_.rows) {
        Row row;
        row.coeff = r.coeff;
        row.lower = r.lower;
        row.upper = r.upper;
        rows_.push_back(std::move(row));
      }
    }
    // Band rows: the constraint sample points plus a fixed spread of extras.
    std::vector<Rational> pts = cs_.sample_points;
    for (long k = 0; k <= 16; ++k) pts.push_back(a_ * Rational(k, 16));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (const Rational& x : pts) {
      Enclosure fx = eval_enclosure(f_.expr, x, norm_prec_);
      Row row;
      row.coeff.resize(n_);
      Rational xp(1);
      for (std::size_t i = 0; i < n_; ++i) {
        row.coeff[i] = xp.mul_2exp(-box_.bits[i]);
        xp *= x;
      }
      row.band = true;
      row.f_lo = fx.lo().to_rational();
      row.f_hi = fx.hi().to_rational();
      rows_.push_back(std::move(row));
    }
    for (Row& row : rows_) row.build_suffixes(box_);
    seed_ = std::nullopt;
    if (opts_.seed && box_.contains(opts_.seed->tuple) &&
        opts_.seed->error.hi().is_finite() && passes_static_rows(opts_.seed->tuple)) {
      seed_ = opts_.seed;
    }
  }

  bool passes_static_rows(const std::vector<Int>& tuple) const {
    for (const Row& row : rows_) {
      if (row.band) continue;
      Rational s(0);
      for (std::size_t i = 0; i < n_; ++i) s += row.coeff[i] * Rational(tuple[i]);
      if (s < row.lower || s > row.upper) return false;
    }
    return true;
  }

  RowBounds bounds_for(bool have, const Rational& bound) const {
    RowBounds b(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Row& row = rows_[r];
      if (!row.band) {
        b[r] = {row.lower, row.upper};
      } else if (have) {
        b[r] = {row.f_lo - bound, row.f_hi + bound};
      } else {
        b[r] = {row.suffix_min[0] - Rational(1), row.suffix_max[0] + Rational(1)};
      }
    }
    return b;
  }

  struct WalkState {
    std::vector<std::vector<Rational>> partial;  // [level][row]
    std::vector<Int> tuple;
    std::uint64_t pruned = 0;
  };

  WalkState make_state() const {
    WalkState st;
    st.partial.assign(n_, std::vector<Rational>(rows_.size()));
    st.tuple.assign(n_, Int(0));
    return st;
  }

  /// Lexicographic walk with per-row partial sums; prefix pins the leading
  /// levels. leaf(st) returning false stops the walk.
  template <typename LeafFn>
  bool walk(WalkState& st, std::size_t level, const std::vector<Int>& prefix,
            const RowBounds& bounds, LeafFn&& leaf) {
    const Int& from = level < prefix.size() ? prefix[level] : box_.lo[level];
    const Int& to = level < prefix.size() ? prefix[level] : box_.hi[level];
    for (Int c = from; c <= to; ++c) {
      st.tuple[level] = c;
      bool ok = true;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        Rational s = (level ? st.partial[level - 1][r] : Rational(0)) +
                     rows_[r].coeff[level] * Rational(c);
        st.partial[level][r] = std::move(s);
        const Rational& p = st.partial[level][r];
        if (p + rows_[r].suffix_max[level + 1] < bounds[r].first ||
            p + rows_[r].suffix_min[level + 1] > bounds[r].second) {
          ok = false;
          break;
        }
      }
      if (!ok) {
        st.pruned += static_cast<std::uint64_t>(subtree_sizes_[level + 1]);
        continue;
      }
      if (level + 1 == n_) {
        if (!leaf(st)) return false;
      } else {
        if (!walk(st, level + 1, prefix, bounds, leaf)) return false;
      }
    }
    return true;
  }

  NormResult candidate_norm(const Polynomial& q, const std::optional<Rational>& give_up,
                            long extra_tol_bits, mpfr_prec_t prec) {
    SupNormOptions nopts;
    nopts.tol_bits = opts_.tol_bits + extra_tol_bits;
    nopts.prec = prec;
    nopts.give_up_above = give_up;
    nopts.cache = &cache_;
    return sup_norm(f_, q, a_, nopts);
  }

  /// True when a should replace b (strictly smaller certified error, or an
  /// unresolved tie broken toward the lexicographically smaller tuple).
  bool resolve_better(Evaluated& a, Evaluated& b) {
    if (a.tuple == b.tuple) return false;
    for (int level = 0;; ++level) {
      if (a.error.hi() < b.error.lo()) return true;
      if (b.error.hi() < a.error.lo()) return false;
      if (level >= 2) break;  // escalation floor (2x working precision) reached
      mpfr_prec_t prec = norm_prec_ << (level + 1);
      long extra = 16 * (level + 1);
      NormResult ra = candidate_norm(a.poly, std::nullopt, extra, prec);
      NormResult rb = candidate_norm(b.poly, std::nullopt, extra, prec);
      a.error = Enclosure(Real::max(a.error.lo(), ra.value.lo()),
                          Real::min(a.error.hi(), ra.value.hi()));
      b.error = Enclosure(Real::max(b.error.lo(), rb.value.lo()),
                          Real::min(b.error.hi(), rb.value.hi()));
    }
    return lex_less(a.tuple, b.tuple);
  }

  /// Pass 1 (parallel): drive the shared error bound down to the optimum.
  void bound_pass() {
    bound_ = Rational(0);
    have_bound_ = false;
    if (seed_) {
      bound_ = seed_->error.hi().to_rational();
      have_bound_ = true;
    }

    unsigned hw = std::thread::hardware_concurrency();
    int workers = opts_.workers > 0 ? opts_.workers : (hw ? static_cast<int>(hw) : 4);

    std::vector<std::vector<Int>> prefixes{{}};
    std::size_t depth = 0;
    while (depth + 1 < n_ && prefixes.size() < static_cast<std::size_t>(workers) * 8) {
      if (!counts_[depth].fits_long() || counts_[depth].to_long() > 4096) break;
      std::vector<std::vector<Int>> next;
      for (const auto& p : prefixes) {
        for (Int c = box_.lo[depth]; c <= box_.hi[depth]; ++c) {
          auto q = p;
          q.push_back(c);
          next.push_back(std::move(q));
        }
      }
      prefixes = std::move(next);
      ++depth;
    }

    std::atomic<std::size_t> cursor{0};
    std::atomic<std::uint64_t> a_checked{0}, a_pruned{0};
    std::exception_ptr first_error;
    std::mutex error_mu;

    auto work_body = [&]() {
      for (;;) {
        std::size_t idx = cursor.fetch_add(1);
        if (idx >= prefixes.size()) break;
        Rational snap_bound;
        bool snap_have;
        {
          std::lock_guard<std::mutex> lock(mu_);
          snap_bound = bound_;
          snap_have = have_bound_;
        }
        RowBounds bounds = bounds_for(snap_have, snap_bound);
        WalkState st = make_state();
        walk(st, 0, prefixes[idx], bounds, [&](WalkState& s) {
          std::optional<Rational> give_up;
          {
            std::lock_guard<std::mutex> lock(mu_);
            if (have_bound_) give_up = bound_;
          }
          Polynomial q = tuple_polynomial(box_, s.tuple);
          NormResult norm = candidate_norm(q, give_up, 0, norm_prec_);
          std::uint64_t done = a_checked.fetch_add(1) + 1;
          if (opts_.progress && done % 64 == 0)
            opts_.progress(done, a_pruned.load(std::memory_order_relaxed));
          if (!norm.aborted && norm.value.hi().is_finite()) {
            std::lock_guard<std::mutex> lock(mu_);
            Rational h = norm.value.hi().to_rational();
            if (!have_bound_ || h < bound_) {
              bound_ = std::move(h);
              have_bound_ = true;
            }
          }
          return true;
        });
        a_pruned.fetch_add(st.pruned);
      }
    };
    auto work = [&]() {
      try {
        work_body();
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        cursor.store(prefixes.size());  // drain remaining work
      }
    };

    if (workers <= 1 || prefixes.size() <= 1) {
      work_body();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      for (int w = 0; w < workers; ++w) pool.emplace_back(work);
      for (auto& th : pool) th.join();
      if (first_error) std::rethrow_exception(first_error);
    }
    pass1_checked_ = a_checked.load();
    pass1_pruned_ = a_pruned.load();
  }

  /// Pass 2 (sequential, fixed bound): resolve the winner deterministically.
  SearchResult two_pass() {
    bound_pass();

    SearchResult out;
    std::optional<Evaluated> best;
    if (seed_) best = Evaluated{seed_->tuple, tuple_polynomial(box_, seed_->tuple), seed_->error};

    RowBounds bounds = bounds_for(have_bound_, bound_);
    std::optional<Rational> give_up;
    if (have_bound_) give_up = bound_;

    WalkState st = make_state();
    std::uint64_t checked = 0;
    std::vector<Int> no_prefix;
    walk(st, 0, no_prefix, bounds, [&](WalkState& s) {
      Evaluated ev;
      ev.tuple = s.tuple;
      ev.poly = tuple_polynomial(box_, ev.tuple);
      NormResult norm = candidate_norm(ev.poly, give_up, 0, norm_prec_);
      ++checked;
      if (opts_.progress && checked % 16 == 0)
        opts_.progress(pass1_checked_ + checked, pass1_pruned_ + s.pruned);
      if (norm.aborted) return true;  // certified worse than the optimum bound
      ev.error = norm.value;
      if (!best) {
        best = std::move(ev);
      } else if (resolve_better(ev, *best)) {
        best = std::move(ev);
      }
      return true;
    });

    if (best) {
      out.found = true;
      out.tuple = best->tuple;
      out.pstar = best->poly;
      out.error = best->error;
    }
    out.checked = checked;
    out.pruned = st.pruned;
    return out;
  }

  const FunctionOracle& f_;
  const Rational& a_;
  const CandidateBox& box_;
  const ConstraintSet& cs_;
  const Real& lambda_bound_;
  const SearchOptions& opts_;
  std::size_t n_ = 0;
  mpfr_prec_t norm_prec_ = 128;
  std::vector<Int> counts_;
  std::vector<double> subtree_sizes_;
  std::vector<Row> rows_;
  std::optional<SearchSeed> seed_;
  Rational bound_;
  bool have_bound_ = false;
  std::mutex mu_;
  std::uint64_t pass1_checked_ = 0, pass1_pruned_ = 0;
  SupNormCache cache_;
};

}  // namespace

SearchResult best_truncated(const FunctionOracle& f, const Rational& a, const CandidateBox& box,
                            const ConstraintSet& constraints, const Real& lambda_bound,
                            const SearchOptions& opts) {
  Searcher s(f, a, box, constraints, lambda_bound, opts);
  return s.run();
}

SearchResult brute_force_oracle(const FunctionOracle& f, const Rational& a, const BitBudget& bits,
                                const CandidateBox& wide_box, mpfr_prec_t prec) {
  if (wide_box.empty()) throw ConfigError("brute_force_oracle: empty candidate box");
  if (wide_box.total() > Int(1000000))
    throw ConfigError("brute_force_oracle: box exceeds the 10^6 tuple cap");
  (void)bits;  // carried by the box; kept for signature symmetry

  const std::size_t n = wide_box.lo.size();
  const long grid = std::max<long>(512, 64 * static_cast<long>(n));
  std::vector<Real> fvals, xvals;
  fvals.reserve(grid + 1);
  xvals.reserve(grid + 1);
  for (long j = 0; j <= grid; ++j) {
    Real x(a * Rational(j, grid), prec);
    fvals.push_back(eval_real(f.expr, x));
    xvals.push_back(std::move(x));
  }

  std::vector<Int> tuple(n), best_tuple;
  Real best_err(prec);
  bool found = false;

  for (std::size_t i = 0; i < n; ++i) tuple[i] = wide_box.lo[i];
  for (;;) {
    std::vector<Rational> coeffs(n);
    for (std::size_t i = 0; i < n; ++i) coeffs[i] = wide_box.coeff_value(i, tuple[i]);
    Polynomial q(std::move(coeffs));
    Real worst(0L, prec);
    for (long j = 0; j <= grid; ++j) {
      Real e = (fvals[static_cast<std::size_t>(j)] - q.eval(xvals[static_cast<std::size_t>(j)]))
                   .abs();
      if (e > worst) worst = e;
    }
    if (!found || worst < best_err) {
      found = true;
      best_err = worst;
      best_tuple = tuple;
    }
    // lexicographic odometer, last coordinate fastest
    std::size_t k = n;
    bool wrapped = true;
    while (k-- > 0) {
      ++tuple[k];
      if (tuple[k] <= wide_box.hi[k]) {
        wrapped = false;
        break;
      }
      tuple[k] = wide_box.lo[k];
    }
    if (wrapped) break;
  }

  SearchResult out;
  out.found = found;
  out.tuple = best_tuple;
  out.pstar = tuple_polynomial(wide_box, best_tuple);
  Rational est = best_err.to_rational();
  // Estimate resolution: the scan undershoots peaks by O(h^2) for the unit
  // curvature scales of this battery.
  Rational h = a / Rational(grid);
  Rational slack = est.mul_2exp(-14) + h * h;
  out.error = Enclosure(est - slack, est + slack, prec);
  out.checked = static_cast<std::uint64_t>(wide_box.total().to_double());
  return out;
}

}  // namespace polstar
