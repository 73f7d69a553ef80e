#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "polstar/errors.hpp"
#include "polstar/pipeline.hpp"

using namespace polstar;

namespace {

std::vector<long> parse_bits(const std::string& csv) {
  std::vector<long> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t comma = csv.find(',', pos);
    std::string tok = csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    out.push_back(std::stol(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string parse_interval(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) return text;  // bare endpoint
  std::string lo = text.substr(0, colon);
  if (lo != "0") throw ConfigError("interval must start at 0 (use 0:<endpoint>)");
  return text.substr(colon + 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"best minimax polynomial with fixed-point coefficient budgets"};

  std::string function, interval, bits_csv, lambda_str, output_path, config_path;
  long degree = -1, refine_d = -1, precision = 0, norm_tol_bits = 0;
  std::string refine_threshold;
  int workers = -1;
  bool interactive = false, debug_vertices = false, quiet = false;

  app.add_option("--function", function, "function to approximate (expression in x or name)");
  app.add_option("--interval", interval, "approximation interval as 0:<endpoint>");
  app.add_option("--degree", degree, "polynomial degree n");
  app.add_option("--bits", bits_csv, "fractional bits m0,m1,...,mn");
  app.add_option("--lambda", lambda_str, "quality factor in (0,1], e.g. 1/2");
  app.add_option("--refine-d", refine_d, "sample count d for polytope refinement");
  app.add_option("--precision", precision, "working precision in bits (default 128)");
  app.add_option("--norm-tol-bits", norm_tol_bits, "sup-norm relative tolerance 2^-bits");
  app.add_option("--refine-threshold", refine_threshold,
                 "auto-refine when the candidate count exceeds this");
  app.add_option("--workers", workers, "search worker threads (0 = all cores)");
  app.add_option("--output", output_path, "write the JSON report here");
  app.add_option("--config", config_path, "JSON config file (flags override it)");
  app.add_flag("--interactive", interactive, "staged console session");
  app.add_flag("--debug-vertices", debug_vertices, "include LP vertices in the report");
  app.add_flag("--quiet", quiet, "suppress the transcript (report file only)");

  CLI11_PARSE(app, argc, argv);

  try {
    ProblemConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config file: " + config_path);
      std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      cfg = config_from_json(text);
    }
    if (!function.empty()) cfg.function = function;
    if (!interval.empty()) cfg.endpoint = parse_interval(interval);
    if (degree >= 0) cfg.degree = static_cast<unsigned>(degree);
    if (!bits_csv.empty()) cfg.bits.bits = parse_bits(bits_csv);
    if (!lambda_str.empty()) cfg.lambda = Rational::from_string(lambda_str);
    if (refine_d >= 1) cfg.refine_d = refine_d;
    if (precision > 0) cfg.precision = precision;
    if (norm_tol_bits > 0) cfg.norm_tol_bits = norm_tol_bits;
    if (!refine_threshold.empty()) cfg.refine_threshold = Int(refine_threshold);
    if (workers >= 0) cfg.workers = workers;
    cfg.debug_vertices = debug_vertices;

    Report report;
    if (interactive) {
      report = interactive_session(cfg, std::cin, std::cout);
    } else {
      auto progress = [&](std::uint64_t checked, std::uint64_t pruned) {
        std::cerr << "\rsearch: checked " << checked << ", pruned " << pruned << std::flush;
      };
      report = polstar::polstar(
          cfg, quiet ? std::function<void(std::uint64_t, std::uint64_t)>{} : progress);
      if (!quiet) std::cerr << "\r" << std::string(60, ' ') << "\r";
      if (!quiet) render_report(report, std::cout);
    }
    if (!output_path.empty()) {
      std::ofstream out(output_path);
      if (!out) throw ConfigError("cannot write report: " + output_path);
      out << report_to_json(report) << "\n";
    }
    if (report.have_pstar && report.feasible) return 0;
    return 2;  // infeasible under lambda (or search skipped as infeasible)
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
