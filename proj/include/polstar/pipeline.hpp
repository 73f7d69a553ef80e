#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polstar/candidates.hpp"
#include "polstar/remez.hpp"
#include "polstar/search.hpp"

namespace polstar {

struct ProblemConfig {
  std::string function;  // expression in x or a builtin name
  std::string endpoint;  // right interval end: rational or expression ("pi/4")
  unsigned degree = 0;
  BitBudget bits;
  Rational lambda{1};
  std::optional<long> refine_d;
  long precision = 128;          // working precision in bits
  long norm_tol_bits = 40;       // sup-norm relative tolerance 2^-bits
  Int refine_threshold{100000};  // auto-refine when the box exceeds this
  int workers = 0;               // 0 = hardware concurrency
  bool debug_vertices = false;

  void validate() const;  // throws ConfigError
};

struct NormReport {
  std::string lo, hi, mid;  // decimal strings at the reporting precision
  bool operator==(const NormReport&) const = default;
};

struct CoefficientReport {
  std::string decimal;
  std::string fraction;   // reduced p/q
  std::string numerator;  // scaled integer c_i
  long exponent = 0;      // m_i
  bool operator==(const CoefficientReport&) const = default;
};

struct DegreeIntervalReport {
  std::string lo_int, hi_int;           // scaled integer bounds
  std::string lo_fraction, hi_fraction;  // reduced fractions
  std::string count;
  bool operator==(const DegreeIntervalReport&) const = default;
};

struct BoxReport {
  std::vector<DegreeIntervalReport> degrees;
  std::string total;
  bool operator==(const BoxReport&) const = default;
};

struct StageTiming {
  std::string stage;
  double seconds = 0;
  bool operator==(const StageTiming&) const = default;
};

struct Report {
  // resolved configuration
  std::string function;
  std::string endpoint;
  std::string a;  // the dyadic endpoint actually used
  unsigned degree = 0;
  std::vector<long> bits;
  std::string lambda;
  long precision = 128;

  // stages (presence tracked by the flags)
  std::vector<std::string> minimax_coefficients;
  NormReport epsilon;
  std::vector<CoefficientReport> hatp;
  NormReport epsilon_hat;

  bool have_box = false;
  BoxReport box;

  bool refined = false;
  long refine_d = 0;
  std::string refine_A;
  BoxReport refined_box;
  std::vector<std::vector<std::string>> debug_vertices;  // per degree: min/max vertex rows

  bool have_pstar = false;
  std::vector<CoefficientReport> pstar;
  NormReport pstar_error;
  bool feasible = false;
  bool constraints_infeasible = false;
  std::uint64_t checked = 0;
  std::uint64_t pruned = 0;

  double ratio = 0;       // ||f - pstar|| / ||f - hatp||
  double bits_saved = 0;  // -log2(ratio)

  std::vector<StageTiming> timings;

  bool operator==(const Report&) const = default;
};

/// Runs the full pipeline: minimax, rounding, norms, coefficient box,
/// optional polytope refinement, exhaustive search.
Report polstar(const ProblemConfig& config,
               const std::function<void(std::uint64_t, std::uint64_t)>& progress = {});

/// Staged console session: prints each summary and asks whether to continue,
/// which lambda to use, whether to refine (and with which d), and whether to
/// change the working precision before the final search.
Report interactive_session(const ProblemConfig& config, std::istream& in, std::ostream& out);

std::string report_to_json(const Report& r);
Report report_from_json(const std::string& text);

/// Human-readable rendering (the batch CLI transcript).
void render_report(const Report& r, std::ostream& out);

/// Flags-or-file configuration loading: parses the JSON object form.
ProblemConfig config_from_json(const std::string& text);

}  // namespace polstar
