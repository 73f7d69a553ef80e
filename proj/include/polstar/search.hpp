#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "polstar/candidates.hpp"
#include "polstar/supnorm.hpp"

namespace polstar {

struct SearchSeed {
  std::vector<Int> tuple;
  Enclosure error;  // certified norm of the seed candidate
};

struct SearchOptions {
  int workers = 0;  // 0 = hardware concurrency
  long tol_bits = 40;
  mpfr_prec_t prec = 128;  // working-precision floor for candidate norms
  std::optional<SearchSeed> seed;  // pre-evaluated candidate (the rounded minimax)
  std::function<void(std::uint64_t checked, std::uint64_t pruned)> progress;
};

struct SearchResult {
  Polynomial pstar;
  std::vector<Int> tuple;
  Enclosure error;
  std::uint64_t checked = 0;  // candidates fully evaluated
  std::uint64_t pruned = 0;   // rejected by constraint rows or grid lower bounds
  bool feasible = false;      // best error provably meets the lambda bound
  bool found = false;
  bool constraints_infeasible = false;  // no tuple satisfied the rows; box-only fallback used
};

/// Scans the integer points of the (tightened) polytope in lexicographic
/// order and returns the candidate with the smallest certified sup norm.
/// Pruning ladder: constraint rows, sampled band bounds against the running
/// incumbent, then the full certified norm. Deterministic across worker
/// counts: a parallel pass establishes the optimal error bound, then a
/// sequential pass under that fixed bound resolves the winner and the
/// lexicographic tie-break.
SearchResult best_truncated(const FunctionOracle& f, const Rational& a, const CandidateBox& box,
                            const ConstraintSet& constraints, const Real& lambda_bound,
                            const SearchOptions& opts = {});

/// Independent test oracle: plain exhaustive scan of the box with a
/// dense-grid round-to-nearest norm estimate. No constraint filtering, no
/// pruning, no shared code with the certified-norm path.
SearchResult brute_force_oracle(const FunctionOracle& f, const Rational& a, const BitBudget& bits,
                                const CandidateBox& wide_box, mpfr_prec_t prec = 256);

}  // namespace polstar
