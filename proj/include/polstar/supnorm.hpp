#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "polstar/expr.hpp"
#include "polstar/polynomial.hpp"

namespace polstar {

/// Thread-safe cache of function/derivative point enclosures, shared across
/// the many norm evaluations of a candidate search (the sampling grid is the
/// same for every candidate).
class SupNormCache {
 public:
  std::optional<Enclosure> find(bool deriv, const Rational& x, mpfr_prec_t prec) const;
  void store(bool deriv, const Rational& x, mpfr_prec_t prec, const Enclosure& v);

 private:
  mutable std::mutex mu_;
  std::map<std::tuple<bool, long, std::string>, Enclosure> map_;
};

struct SupNormOptions {
  long tol_bits = 40;          // relative tolerance 2^-tol_bits
  mpfr_prec_t prec = 128;      // starting working precision
  int max_attempts = 6;        // each attempt doubles precision and grid
  std::size_t grid = 0;        // 0 = max(64, 32*(degree+1))
  bool refine_all_extrema = false;  // converge every local extremum, not just the max
  std::optional<Rational> give_up_above;  // stop early once |f-q| provably exceeds this
  SupNormCache* cache = nullptr;
};

struct NormResult {
  Enclosure value;   // certified enclosure of the sup norm
  Rational witness;  // abscissa with |f-q|(witness) inside the enclosure
  std::vector<std::pair<Rational, Real>> extrema;  // (abscissa, signed error)
  bool aborted = false;  // give_up_above tripped; value.lo is still a valid lower bound
};

/// Certified ||f - q|| over [0, a]: dense grid, certified-sign bracketing of
/// the error derivative, bisection refinement, endpoints always included.
NormResult sup_norm(const FunctionOracle& f, const Polynomial& q, const Rational& a,
                    const SupNormOptions& opts = {});

/// Max over the points of a certified lower bound of |f - q|; always a sound
/// lower bound for the sup norm.
Real grid_lower_bound(const FunctionOracle& f, const Polynomial& q,
                      const std::vector<Rational>& points, mpfr_prec_t prec,
                      SupNormCache* cache = nullptr);

}  // namespace polstar
