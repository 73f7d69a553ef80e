#include "polstar/simplex.hpp"

#include <stdexcept>

namespace polstar {

namespace {

/// Dense tableau: rows of [coeffs | rhs], one basis variable per row, plus an
/// objective row holding reduced costs (z_j - c_j) and the objective value.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), cell_(rows + 1, std::vector<Rational>(cols + 1)), basis_(rows) {}

  Rational& at(std::size_t r, std::size_t c) { return cell_[r][c]; }
  Rational& rhs(std::size_t r) { return cell_[r][cols_]; }
  Rational& obj(std::size_t c) { return cell_[rows_][c]; }
  Rational& obj_value() { return cell_[rows_][cols_]; }
  std::size_t basis(std::size_t r) const { return basis_[r]; }
  void set_basis(std::size_t r, std::size_t v) { basis_[r] = v; }

  void pivot(std::size_t prow, std::size_t pcol) {
    Rational inv = cell_[prow][pcol].reciprocal();
    for (auto& v : cell_[prow]) v *= inv;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == prow || cell_[r][pcol].is_zero()) continue;
      Rational factor = cell_[r][pcol];
      for (std::size_t c = 0; c <= cols_; ++c) cell_[r][c] -= factor * cell_[prow][c];
    }
    basis_[prow] = pcol;
  }

  /// Bland's rule iteration until optimal or unbounded.
  bool optimize(std::size_t usable_cols) {
    for (;;) {
      std::size_t enter = usable_cols;
      for (std::size_t c = 0; c < usable_cols; ++c) {
        if (obj(c).sign() < 0) {
          enter = c;
          break;
        }
      }
      if (enter == usable_cols) return true;  // optimal
      std::size_t leave = rows_;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (cell_[r][enter].sign() <= 0) continue;
        if (leave == rows_) {
          leave = r;
          continue;
        }
        Rational cur = rhs(r) / cell_[r][enter];
        Rational best = rhs(leave) / cell_[leave][enter];
        if (cur < best || (cur == best && basis_[r] < basis_[leave])) leave = r;
      }
      if (leave == rows_) return false;  // unbounded direction
      pivot(leave, enter);
    }
  }

  std::size_t rows_, cols_;
  std::vector<std::vector<Rational>> cell_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  const std::size_t m = lp.A.size();
  const std::size_t n = lp.c.size();
  for (const auto& row : lp.A)
    if (row.size() != n) throw std::invalid_argument("solve_lp: ragged constraint matrix");
  if (lp.b.size() != m) throw std::invalid_argument("solve_lp: rhs size mismatch");

  // Columns: n structural, m slacks, then artificials for rows with b < 0.
  std::size_t artificials = 0;
  for (const auto& bi : lp.b)
    if (bi.sign() < 0) ++artificials;
  const std::size_t cols = n + m + artificials;

  Tableau t(m, cols);
  std::size_t next_art = n + m;
  for (std::size_t r = 0; r < m; ++r) {
    bool flip = lp.b[r].sign() < 0;
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = flip ? -lp.A[r][c] : lp.A[r][c];
    t.at(r, n + r) = flip ? Rational(-1) : Rational(1);
    t.rhs(r) = flip ? -lp.b[r] : lp.b[r];
    if (flip) {
      t.at(r, next_art) = Rational(1);
      t.set_basis(r, next_art);
      ++next_art;
    } else {
      t.set_basis(r, n + r);
    }
  }

  if (artificials > 0) {
    // Phase 1: maximize -sum(artificials); canonicalize by subtracting the
    // artificial rows from the objective.
    for (std::size_t c = n + m; c < cols; ++c) t.obj(c) = Rational(1);
    for (std::size_t r = 0; r < m; ++r) {
      if (t.basis(r) >= n + m) {
        for (std::size_t c = 0; c <= cols; ++c) t.cell_[m][c] -= t.cell_[r][c];
      }
    }
    if (!t.optimize(cols)) throw std::logic_error("solve_lp: phase 1 unbounded");
    if (t.obj_value().sign() != 0) return {LpStatus::Infeasible, Rational(0), {}};
    // Drive any lingering artificial out of the basis.
    for (std::size_t r = 0; r < m; ++r) {
      if (t.basis(r) < n + m) continue;
      std::size_t pcol = cols;
      for (std::size_t c = 0; c < n + m; ++c) {
        if (!t.at(r, c).is_zero()) {
          pcol = c;
          break;
        }
      }
      if (pcol != cols) t.pivot(r, pcol);
      // else: redundant zero row; harmless to leave in place
    }
  }

  // Phase 2 objective over structural and slack columns only.
  for (std::size_t c = 0; c <= cols; ++c) t.obj(c) = Rational(0);
  for (std::size_t c = 0; c < n; ++c) t.obj(c) = -lp.c[c];
  for (std::size_t r = 0; r < m; ++r) {
    std::size_t bv = t.basis(r);
    if (bv < n && !t.obj(bv).is_zero()) {
      Rational factor = t.obj(bv);
      for (std::size_t c = 0; c <= cols; ++c) t.cell_[m][c] -= factor * t.cell_[r][c];
    }
  }
  if (!t.optimize(n + m)) return {LpStatus::Unbounded, Rational(0), {}};

  LpSolution sol;
  sol.status = LpStatus::Optimal;
  sol.x.assign(n, Rational(0));
  for (std::size_t r = 0; r < m; ++r)
    if (t.basis(r) < n) sol.x[t.basis(r)] = t.rhs(r);
  sol.objective = t.obj_value();
  return sol;
}

}  // namespace polstar
