#include "polstar/pipeline.hpp"

#include <chrono>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "polstar/errors.hpp"
#include "polstar/rounding.hpp"

namespace polstar {

namespace {

using nlohmann::json;

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string decimal(const Rational& v, mpfr_prec_t prec) { return Real(v, prec).str(); }

/// Error strings carry the digit count the working precision supports.
std::size_t error_digits(mpfr_prec_t prec) {
  return static_cast<std::size_t>(static_cast<double>(prec) * 0.30103) + 2;
}

NormReport norm_report(const Enclosure& e, mpfr_prec_t prec) {
  std::size_t digits = error_digits(prec);
  NormReport r;
  r.lo = e.lo().round_to(prec, MPFR_RNDD).str(digits);
  r.hi = e.hi().round_to(prec, MPFR_RNDU).str(digits);
  r.mid = e.mid().round_to(prec).str(digits);
  return r;
}

CoefficientReport coefficient_report(const Rational& value, long m, mpfr_prec_t prec) {
  CoefficientReport r;
  r.decimal = decimal(value, prec);
  r.fraction = value.str();
  r.numerator = value.mul_2exp(m).numerator().str();
  r.exponent = m;
  return r;
}

BoxReport box_report(const CandidateBox& box) {
  BoxReport r;
  for (std::size_t i = 0; i < box.lo.size(); ++i) {
    DegreeIntervalReport d;
    d.lo_int = box.lo[i].str();
    d.hi_int = box.hi[i].str();
    d.lo_fraction = box.coeff_value(i, box.lo[i]).str();
    d.hi_fraction = box.coeff_value(i, box.hi[i]).str();
    d.count = (box.lo[i] <= box.hi[i] ? box.hi[i] - box.lo[i] + Int(1) : Int(0)).str();
    r.degrees.push_back(std::move(d));
  }
  r.total = box.total().str();
  return r;
}

/// Staged pipeline state shared by the batch and interactive drivers.
class Stages {
 public:
  explicit Stages(const ProblemConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    report_prec_ = Real::clamp(cfg_.precision);
    f_ = make_oracle(cfg_.function);
    a_ = resolve_endpoint(cfg_.endpoint);
    report_.function = cfg_.function;
    report_.endpoint = cfg_.endpoint;
    report_.a = a_.str();
    report_.degree = cfg_.degree;
    report_.bits = cfg_.bits.bits;
    report_.lambda = cfg_.lambda.str();
    report_.precision = cfg_.precision;
  }

  static Rational resolve_endpoint(const std::string& text) {
    ExprPtr e = parse(text);
    if (auto poly = as_polynomial(e)) {
      if (poly->degree() == 0) {
        Rational v = poly->coeff(0);
        if (v.sign() <= 0) throw ConfigError("endpoint must be positive");
        return v;
      }
      throw ConfigError("endpoint must not depend on x");
    }
    Enclosure enc = eval_enclosure(e, Rational(0), 128);
    // Tight dyadic realization: far below every reported tolerance.
    return dyadic_below(enc, 60);
  }

  void run_minimax() {
    Stopwatch sw;
    RemezOptions ropts;
    ropts.tol_bits = cfg_.norm_tol_bits;
    ropts.prec = cfg_.precision;
    mm_ = minimax(f_, a_, cfg_.degree, ropts);
    report_.minimax_coefficients.clear();
    for (std::size_t i = 0; i <= cfg_.degree; ++i)
      report_.minimax_coefficients.push_back(decimal(mm_.p.coeff(i), report_prec_));
    report_.timings.push_back({"minimax", sw.seconds()});

    Stopwatch swn;
    SupNormOptions tight;
    tight.tol_bits = std::max(128L, cfg_.norm_tol_bits);
    tight.prec = std::max<mpfr_prec_t>(cfg_.precision, 192);
    eps_ = sup_norm(f_, mm_.p, a_, tight).value;
    hatp_ = naive_round(mm_.p, cfg_.bits);
    eps_hat_ = sup_norm(f_, hatp_, a_, tight).value;
    report_.epsilon = norm_report(eps_, report_prec_);
    report_.epsilon_hat = norm_report(eps_hat_, report_prec_);
    report_.hatp.clear();
    hat_tuple_.clear();
    for (std::size_t i = 0; i <= cfg_.degree; ++i) {
      report_.hatp.push_back(coefficient_report(hatp_.coeff(i), cfg_.bits[i], report_prec_));
      hat_tuple_.push_back(hatp_.coeff(i).mul_2exp(cfg_.bits[i]).numerator());
    }
    report_.timings.push_back({"norms", swn.seconds()});
  }

  void run_box(const Rational& lambda) {
    Stopwatch sw;
    lambda_ = lambda;
    report_.lambda = lambda.str();
    box_ = chebyshev_box(mm_.p, eps_, eps_hat_, lambda, a_, cfg_.bits);
    search_box_ = box_;
    report_.box = box_report(box_);
    report_.have_box = true;
    report_.timings.push_back({"box", sw.seconds()});
  }

  /// Returns false when the sampled polytope is infeasible.
  bool run_refine(long d) {
    Stopwatch sw;
    constraints_ = sampled_constraints(f_, a_, d, lambda_, eps_hat_, cfg_.bits,
                                       std::max<mpfr_prec_t>(cfg_.precision, 192));
    TightenDebug debug;
    CandidateBox refined =
        lp_tighten(search_box_, constraints_, cfg_.debug_vertices ? &debug : nullptr);
    report_.refined = true;
    report_.refine_d = d;
    report_.refine_A = constraints_.A.str();
    report_.refined_box = box_report(refined);
    if (cfg_.debug_vertices) {
      report_.debug_vertices.clear();
      for (std::size_t i = 0; i < debug.min_vertex.size(); ++i) {
        std::vector<std::string> row;
        for (const auto& v : debug.min_vertex[i]) row.push_back(v.str());
        for (const auto& v : debug.max_vertex[i]) row.push_back(v.str());
        report_.debug_vertices.push_back(std::move(row));
      }
    }
    report_.timings.push_back({"refine", sw.seconds()});
    if (refined.empty()) {
      report_.constraints_infeasible = true;
      report_.feasible = false;
      return false;
    }
    search_box_ = refined;
    return true;
  }

  void run_search(const std::function<void(std::uint64_t, std::uint64_t)>& progress) {
    if (search_box_.empty()) {
      // No integer point can satisfy the lambda bound: infeasible, not fatal.
      report_.feasible = false;
      report_.constraints_infeasible = true;
      return;
    }
    Stopwatch sw;
    SearchOptions sopts;
    sopts.workers = cfg_.workers;
    sopts.tol_bits = cfg_.norm_tol_bits;
    sopts.prec = cfg_.precision;
    sopts.progress = progress;
    SearchSeed seed;
    seed.tuple = hat_tuple_;
    seed.error = eps_hat_;
    sopts.seed = seed;
    Real lambda_bound = Real(lambda_, 192) * eps_hat_.hi();
    SearchResult res =
        best_truncated(f_, a_, search_box_, constraints_, lambda_bound, sopts);
    report_.timings.push_back({"search", sw.seconds()});
    if (!res.found) return;
    report_.have_pstar = true;
    report_.feasible = res.feasible;
    report_.constraints_infeasible = res.constraints_infeasible;
    report_.checked = res.checked;
    report_.pruned = res.pruned;
    report_.pstar.clear();
    for (std::size_t i = 0; i <= cfg_.degree; ++i)
      report_.pstar.push_back(
          coefficient_report(res.pstar.coeff(i), cfg_.bits[i], report_prec_));
    report_.pstar_error = norm_report(res.error, report_prec_);

    Real ratio = res.error.mid() / eps_hat_.mid();
    report_.ratio = ratio.to_double();
    report_.bits_saved = -ratio.log2_approx();
  }

  const Report& report() const { return report_; }
  Report take_report() { return std::move(report_); }
  const CandidateBox& box() const { return box_; }
  const CandidateBox& search_box() const { return search_box_; }
  const ProblemConfig& config() const { return cfg_; }
  void set_precision(long bits) { cfg_.precision = std::max(64L, bits); }
  mpfr_prec_t report_precision() const { return report_prec_; }

 private:
  ProblemConfig cfg_;
  Report report_;
  FunctionOracle f_;
  Rational a_;
  MinimaxResult mm_;
  Polynomial hatp_;
  Enclosure eps_, eps_hat_;
  std::vector<Int> hat_tuple_;
  Rational lambda_;
  CandidateBox box_, search_box_;
  ConstraintSet constraints_;
  mpfr_prec_t report_prec_;
};

}  // namespace

void ProblemConfig::validate() const {
  if (function.empty()) throw ConfigError("missing function");
  if (endpoint.empty()) throw ConfigError("missing interval endpoint");
  if (bits.size() != degree + 1)
    throw ConfigError("bits must list exactly degree+1 entries (m_0..m_n)");
  if (lambda.sign() <= 0 || lambda > Rational(1))
    throw ConfigError("lambda must lie in (0, 1]");
  if (refine_d && *refine_d < 1) throw ConfigError("refine d must be at least 1");
  if (precision < 64) throw ConfigError("precision must be at least 64 bits");
  if (norm_tol_bits < 8 || norm_tol_bits > 512)
    throw ConfigError("norm tolerance must be between 8 and 512 bits");
}

namespace {

template <typename Fn>
void run_stage(const char* stage, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    throw Error(std::string(stage) + " stage: " + e.what());
  }
}

}  // namespace

Report polstar(const ProblemConfig& config,
               const std::function<void(std::uint64_t, std::uint64_t)>& progress) {
  Stages st(config);
  run_stage("minimax", [&] { st.run_minimax(); });
  run_stage("box", [&] { st.run_box(config.lambda); });
  bool searchable = true;
  if (config.refine_d) {
    run_stage("refine", [&] { searchable = st.run_refine(*config.refine_d); });
  } else if (st.box().total() > config.refine_threshold) {
    run_stage("refine", [&] { searchable = st.run_refine(25); });
  }
  if (searchable) run_stage("search", [&] { st.run_search(progress); });
  return st.take_report();
}

namespace {

std::string prompt_line(std::istream& in, std::ostream& out, const std::string& prompt) {
  out << prompt << " " << std::flush;
  std::string line;
  if (!std::getline(in, line)) return "";  // EOF: caller applies its default
  // trim
  auto b = line.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = line.find_last_not_of(" \t\r\n");
  return line.substr(b, e - b + 1);
}

bool prompt_yes_no(std::istream& in, std::ostream& out, const std::string& prompt) {
  for (;;) {
    std::string s = prompt_line(in, out, prompt + " (y/n)?");
    if (s.empty()) {
      if (!in.good()) return false;  // EOF defaults to no
      continue;
    }
    if (s == "y" || s == "Y" || s == "yes") return true;
    if (s == "n" || s == "N" || s == "no") return false;
    out << "please answer y or n\n";
  }
}

void print_box(const BoxReport& box, std::ostream& out) {
  for (std::size_t i = 0; i < box.degrees.size(); ++i) {
    const auto& d = box.degrees[i];
    out << "degree " << i << ": " << d.count << " candidate values in [" << d.lo_fraction
        << ", " << d.hi_fraction << "]\n";
  }
  out << "candidates to check: " << box.total << "\n";
}

void print_coefficients(const std::vector<CoefficientReport>& cs, std::ostream& out) {
  for (std::size_t i = 0; i < cs.size(); ++i) {
    out << "  x^" << i << ": " << cs[i].fraction << " = " << cs[i].decimal << "\n";
  }
}

}  // namespace

Report interactive_session(const ProblemConfig& config, std::istream& in, std::ostream& out) {
  Stages st(config);
  out << "function " << config.function << " on [0, " << st.report().a << "], degree "
      << config.degree << ", bits";
  for (long m : config.bits.bits) out << " " << m;
  out << "\n";

  st.run_minimax();
  out << "minimax coefficients:\n";
  for (std::size_t i = 0; i < st.report().minimax_coefficients.size(); ++i)
    out << "  x^" << i << ": " << st.report().minimax_coefficients[i] << "\n";
  out << "distance between f and p: " << st.report().epsilon.mid << "\n";
  out << "rounded polynomial:\n";
  print_coefficients(st.report().hatp, out);
  out << "distance between f and hatp: " << st.report().epsilon_hat.mid << "\n";

  if (!prompt_yes_no(in, out, "Continue")) return st.take_report();

  Rational lambda = config.lambda;
  for (;;) {
    std::string s = prompt_line(in, out, "lambda in (0, 1] (default " + lambda.str() + "):");
    if (s.empty()) break;
    try {
      Rational v = Rational::from_string(s);
      if (v.sign() <= 0 || v > Rational(1)) {
        out << "lambda must lie in (0, 1]\n";
        continue;
      }
      lambda = v;
      break;
    } catch (const std::exception&) {
      out << "malformed rational\n";
    }
  }
  st.run_box(lambda);
  print_box(st.report().box, out);

  bool searchable = true;
  while (prompt_yes_no(in, out, "Refine the bounds with sampled constraints")) {
    long d = 0;
    for (;;) {
      std::string s = prompt_line(in, out, "sample parameter d:");
      try {
        if (!s.empty()) d = std::stol(s);
      } catch (const std::exception&) {
        d = 0;
      }
      if (d >= 1) break;
      if (!in.good()) break;
      out << "d must be a positive integer\n";
    }
    if (d < 1) break;
    searchable = st.run_refine(d);
    if (!searchable) {
      out << "the sampled polytope is infeasible: no candidate satisfies the lambda bound\n";
      break;
    }
    print_box(st.report().refined_box, out);
  }

  if (searchable && prompt_yes_no(in, out, "Change the working precision")) {
    std::string s = prompt_line(in, out, "precision bits:");
    try {
      if (!s.empty()) st.set_precision(std::stol(s));
    } catch (const std::exception&) {
      out << "keeping precision\n";
    }
  }

  if (searchable) {
    Stopwatch sw;
    st.run_search({});
    const Report& r = st.report();
    if (r.have_pstar) {
      out << "best truncated polynomial:\n";
      print_coefficients(r.pstar, out);
      out << "distance between f and pstar: " << r.pstar_error.mid << "\n";
      out << (r.feasible ? "lambda bound met\n" : "lambda bound NOT met (best-in-box shown)\n");
      out << "bits saved over plain rounding: " << r.bits_saved << "\n";
    }
    out << "elapsed seconds: " << sw.seconds() << "\n";
  }
  return st.take_report();
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

json coeffs_to_json(const std::vector<CoefficientReport>& cs) {
  json arr = json::array();
  for (const auto& c : cs)
    arr.push_back({{"decimal", c.decimal},
                   {"fraction", c.fraction},
                   {"numerator", c.numerator},
                   {"exponent", c.exponent}});
  return arr;
}

std::vector<CoefficientReport> coeffs_from_json(const json& arr) {
  std::vector<CoefficientReport> out;
  for (const auto& c : arr) {
    CoefficientReport r;
    r.decimal = c.at("decimal").get<std::string>();
    r.fraction = c.at("fraction").get<std::string>();
    r.numerator = c.at("numerator").get<std::string>();
    r.exponent = c.at("exponent").get<long>();
    out.push_back(std::move(r));
  }
  return out;
}

json norm_to_json(const NormReport& n) {
  return {{"lo", n.lo}, {"hi", n.hi}, {"mid", n.mid}};
}

NormReport norm_from_json(const json& j) {
  NormReport n;
  n.lo = j.at("lo").get<std::string>();
  n.hi = j.at("hi").get<std::string>();
  n.mid = j.at("mid").get<std::string>();
  return n;
}

json box_to_json(const BoxReport& b) {
  json degrees = json::array();
  for (const auto& d : b.degrees)
    degrees.push_back({{"lo_int", d.lo_int},
                       {"hi_int", d.hi_int},
                       {"lo_fraction", d.lo_fraction},
                       {"hi_fraction", d.hi_fraction},
                       {"count", d.count}});
  return {{"degrees", degrees}, {"total", b.total}};
}

BoxReport box_from_json(const json& j) {
  BoxReport b;
  for (const auto& d : j.at("degrees")) {
    DegreeIntervalReport r;
    r.lo_int = d.at("lo_int").get<std::string>();
    r.hi_int = d.at("hi_int").get<std::string>();
    r.lo_fraction = d.at("lo_fraction").get<std::string>();
    r.hi_fraction = d.at("hi_fraction").get<std::string>();
    r.count = d.at("count").get<std::string>();
    b.degrees.push_back(std::move(r));
  }
  b.total = j.at("total").get<std::string>();
  return b;
}

}  // namespace

std::string report_to_json(const Report& r) {
  json j;
  j["config"] = {{"function", r.function}, {"endpoint", r.endpoint},
                 {"degree", r.degree},     {"bits", r.bits},
                 {"lambda", r.lambda},     {"precision", r.precision}};
  j["a"] = r.a;
  j["minimax"] = {{"coefficients", r.minimax_coefficients},
                  {"epsilon", norm_to_json(r.epsilon)}};
  j["hatp"] = {{"coefficients", coeffs_to_json(r.hatp)},
               {"epsilon_hat", norm_to_json(r.epsilon_hat)}};
  if (r.have_box) j["box"] = box_to_json(r.box);
  if (r.refined) {
    j["refined"] = {{"d", r.refine_d}, {"A", r.refine_A}, {"box", box_to_json(r.refined_box)}};
    if (!r.debug_vertices.empty()) j["refined"]["vertices"] = r.debug_vertices;
  }
  if (r.have_pstar) {
    j["pstar"] = {{"coefficients", coeffs_to_json(r.pstar)},
                  {"error", norm_to_json(r.pstar_error)},
                  {"feasible", r.feasible},
                  {"checked", r.checked},
                  {"pruned", r.pruned}};
    j["ratio"] = r.ratio;
    j["bits_saved"] = r.bits_saved;
  }
  j["constraints_infeasible"] = r.constraints_infeasible;
  json timings = json::array();
  for (const auto& t : r.timings) timings.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  j["timings"] = timings;
  return j.dump(2);
}

Report report_from_json(const std::string& text) {
  json j = json::parse(text);
  Report r;
  const json& cfg = j.at("config");
  r.function = cfg.at("function").get<std::string>();
  r.endpoint = cfg.at("endpoint").get<std::string>();
  r.degree = cfg.at("degree").get<unsigned>();
  r.bits = cfg.at("bits").get<std::vector<long>>();
  r.lambda = cfg.at("lambda").get<std::string>();
  r.precision = cfg.at("precision").get<long>();
  r.a = j.at("a").get<std::string>();
  r.minimax_coefficients = j.at("minimax").at("coefficients").get<std::vector<std::string>>();
  r.epsilon = norm_from_json(j.at("minimax").at("epsilon"));
  r.hatp = coeffs_from_json(j.at("hatp").at("coefficients"));
  r.epsilon_hat = norm_from_json(j.at("hatp").at("epsilon_hat"));
  if (j.contains("box")) {
    r.have_box = true;
    r.box = box_from_json(j.at("box"));
  }
  if (j.contains("refined")) {
    r.refined = true;
    r.refine_d = j.at("refined").at("d").get<long>();
    r.refine_A = j.at("refined").at("A").get<std::string>();
    r.refined_box = box_from_json(j.at("refined").at("box"));
    if (j.at("refined").contains("vertices"))
      r.debug_vertices = j.at("refined").at("vertices").get<std::vector<std::vector<std::string>>>();
  }
  if (j.contains("pstar")) {
    r.have_pstar = true;
    r.pstar = coeffs_from_json(j.at("pstar").at("coefficients"));
    r.pstar_error = norm_from_json(j.at("pstar").at("error"));
    r.feasible = j.at("pstar").at("feasible").get<bool>();
    r.checked = j.at("pstar").at("checked").get<std::uint64_t>();
    r.pruned = j.at("pstar").at("pruned").get<std::uint64_t>();
    r.ratio = j.at("ratio").get<double>();
    r.bits_saved = j.at("bits_saved").get<double>();
  }
  r.constraints_infeasible = j.at("constraints_infeasible").get<bool>();
  for (const auto& t : j.at("timings"))
    r.timings.push_back({t.at("stage").get<std::string>(), t.at("seconds").get<double>()});
  return r;
}

void render_report(const Report& r, std::ostream& out) {
  out << "function " << r.function << " on [0, " << r.a << "]\n";
  out << "degree " << r.degree << ", bits";
  for (long m : r.bits) out << " " << m;
  out << ", lambda " << r.lambda << "\n\n";
  out << "minimax coefficients:\n";
  for (std::size_t i = 0; i < r.minimax_coefficients.size(); ++i)
    out << "  x^" << i << ": " << r.minimax_coefficients[i] << "\n";
  out << "distance between f and p: " << r.epsilon.mid << "\n\n";
  out << "rounded polynomial:\n";
  print_coefficients(r.hatp, out);
  out << "distance between f and hatp: " << r.epsilon_hat.mid << "\n\n";
  if (r.have_box) {
    out << "coefficient bounds:\n";
    print_box(r.box, out);
  }
  if (r.refined) {
    out << "\nafter refinement with d = " << r.refine_d << " (A = " << r.refine_A << "):\n";
    print_box(r.refined_box, out);
  }
  if (r.constraints_infeasible && !r.have_pstar) {
    out << "\nthe sampled polytope is infeasible: no candidate can satisfy the lambda bound\n";
    return;
  }
  if (r.have_pstar) {
    out << "\nbest truncated polynomial (checked " << r.checked << ", pruned " << r.pruned
        << "):\n";
    print_coefficients(r.pstar, out);
    out << "distance between f and pstar: " << r.pstar_error.mid << "\n";
    out << (r.feasible ? "lambda bound met\n" : "lambda bound NOT met (best-in-box shown)\n");
    out << "error ratio pstar/hatp: " << r.ratio << "\n";
    out << "bits saved over plain rounding: " << r.bits_saved << "\n";
  }
}

ProblemConfig config_from_json(const std::string& text) {
  json j = json::parse(text);
  ProblemConfig cfg;
  if (j.contains("function")) cfg.function = j.at("function").get<std::string>();
  if (j.contains("endpoint")) cfg.endpoint = j.at("endpoint").get<std::string>();
  if (j.contains("degree")) cfg.degree = j.at("degree").get<unsigned>();
  if (j.contains("bits")) cfg.bits.bits = j.at("bits").get<std::vector<long>>();
  if (j.contains("lambda")) cfg.lambda = Rational::from_string(j.at("lambda").get<std::string>());
  if (j.contains("refine_d")) cfg.refine_d = j.at("refine_d").get<long>();
  if (j.contains("precision")) cfg.precision = j.at("precision").get<long>();
  if (j.contains("norm_tol_bits")) cfg.norm_tol_bits = j.at("norm_tol_bits").get<long>();
  if (j.contains("refine_threshold"))
    cfg.refine_threshold = Int(j.at("refine_threshold").get<std::string>());
  if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
  return cfg;
}

}  // namespace polstar
