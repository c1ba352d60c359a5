// zeta: command-line front end. Results go to stdout as CSV, diagnostics to
// stderr. Exit codes: 0 success, 1 bad input or usage, 2 certification or
// degeneracy failure, 3 resource or accuracy failure.
#include "lzeta/errors.hpp"
#include "lzeta/pipeline.hpp"
#include "lzeta/problem_io.hpp"
#include "lzeta/report.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

using namespace lzeta;

namespace {

struct Options {
  std::string command;
  std::string path;
  std::optional<int> depth;
  std::optional<double> tol;
  std::vector<std::string> z;
  std::optional<std::string> branch;
  std::vector<std::string> plot;
  bool trace = false;
};

Complex parse_z(const std::string& text) {
  auto comma = text.find(',');
  try {
    size_t used = 0;
    if (comma == std::string::npos) {
      double re = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {re, 0.0};
    }
    std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(text);
    double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(text);
    return {re, im};
  } catch (const std::logic_error&) {
    throw ParseError("--z expects 're,im', got '" + text + "'");
  }
}

// Plot samples on [a, b]; samples inside an exclusion disc are dropped.
std::vector<Complex> plot_points(const std::vector<std::string>& spec, const PoleCatalog& catalog) {
  double a = 0.0, b = 0.0;
  long n = 0;
  try {
    a = std::stod(spec[0]);
    b = std::stod(spec[1]);
    n = std::stol(spec[2]);
  } catch (const std::logic_error&) {
    throw ParseError("--plot expects 're_min re_max steps'");
  }
  if (!(a < b) || n < 2) throw ParseError("--plot needs re_min < re_max and at least 2 steps");
  std::vector<Complex> out;
  for (long k = 0; k < n; ++k) {
    double x = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
    bool near = false;
    for (const auto& e : catalog.entries) near = near || std::abs(x - e.location.to_double()) <= 2.0 * kPoleExclusion;
    if (!near) out.emplace_back(x, 0.0);
  }
  return out;
}

int run(const Options& opt) {
  Problem problem = load_problem(opt.path);
  if (opt.depth) {
    if (*opt.depth < 0 || *opt.depth > 12) throw SemanticError("--depth must lie in 0..12");
    problem.run.depth = *opt.depth;
  }
  if (opt.tol) {
    if (!(*opt.tol > 0.0 && *opt.tol < 1.0)) throw SemanticError("--tol must lie in (0, 1)");
    problem.run.tol = *opt.tol;
  }
  if (opt.branch) problem.run.branch = *opt.branch == "lower" ? -1 : 1;

  bool want_trace = opt.trace || opt.command == "trace";
  Analysis an = analyze(problem, want_trace);
  QuadConfig qc = quad_config(problem);
  // Everything is computed before anything is printed, so a failure leaves
  // stdout empty.
  std::ostringstream out;
  if (opt.command == "trace") {
    for (const auto& line : an.rep.trace) out << line << "\n";
  } else {
    if (opt.trace)
      for (const auto& line : an.rep.trace) std::cerr << line << "\n";
    if (opt.command == "poles") {
      auto scan = scan_poles(problem, an);
      write_catalog(out, an.catalog, &scan);
    } else if (opt.command == "residues") {
      auto scan = scan_poles(problem, an);
      write_residues(out, scan);
    } else if (opt.command == "eval") {
      if (opt.z.empty() && opt.plot.empty()) throw ParseError("eval needs at least one --z re,im or --plot a b n");
      if (!opt.z.empty()) {
        std::vector<Complex> zs;
        for (const auto& t : opt.z) zs.push_back(parse_z(t));
        write_values(out, eval_F(an.rep, an.catalog, zs, qc));
      }
      if (!opt.plot.empty()) {
        auto zs = plot_points(opt.plot, an.catalog);
        write_plot(out, eval_F(an.rep, an.catalog, zs, qc));
      }
    } else if (opt.command == "verify") {
      VerifyReport r = verify_consistency(problem, an.geometry.eta, an.rep, an.catalog, qc);
      write_verify(out, r);
      std::cout << out.str();
      for (const auto& p : r.points)
        if (!p.failure.empty()) std::cerr << "zeta: z=" << p.z << ": " << p.failure << "\n";
      if (!r.pass) {
        std::cerr << "zeta: continued F deviates from the direct integral by " << r.max_deviation << "\n";
        return 3;
      }
      return 0;
    }
  }
  std::cout << out.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meromorphic continuation of local zeta functions F(z) = int f^z phi dx"};
  Options opt;
  app.add_option("command", opt.command, "poles | eval | verify | residues | trace")
      ->required()
      ->check(CLI::IsMember({"poles", "eval", "verify", "residues", "trace"}));
  app.add_option("problem", opt.path, "problem file")->required();
  app.add_option("--depth", opt.depth, "continuation depth L");
  app.add_option("--tol", opt.tol, "relative quadrature tolerance");
  app.add_option("--z", opt.z, "evaluation point re,im (repeatable; use --z=-1.5,0 for negative values)");
  app.add_option("--branch", opt.branch, "log(-1) = +i pi (upper) or -i pi (lower)")
      ->check(CLI::IsMember({"upper", "lower"}));
  app.add_option("--plot", opt.plot, "re_min re_max steps: |F| along the real axis")->expected(3);
  app.add_flag("--trace", opt.trace, "rewrite tree to stderr");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  try {
    return run(opt);
  } catch (const CertificationError& e) {
    std::cerr << "zeta: certification failed: " << e.what() << "\n";
    return 2;
  } catch (const DegeneracyError& e) {
    std::cerr << "zeta: degenerate input: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "zeta: resource limit: " << e.what() << "\n";
    return 3;
  } catch (const AccuracyError& e) {
    std::cerr << "zeta: accuracy not reached: " << e.what() << " (achieved " << e.achieved() << ")\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "zeta: parse error: " << e.what() << "\n";
    return 1;
  } catch (const PoleProximityError& e) {
    std::cerr << "zeta: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "zeta: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "zeta: internal error: " << e.what() << "\n";
    return 1;
  }
}
