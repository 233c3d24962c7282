#include "qbdshift/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace qbd {

namespace {

using ordered = nlohmann::ordered_json;

ordered num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

ordered matrix_json(const Matrix& m) {
  ordered arr = ordered::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(num(m(i, j)));
  }
  return arr;
}

ordered root_json(const Root& r) {
  if (r.infinite) return "inf";
  return ordered{{"re", num(r.value.real())}, {"im", num(r.value.imag())}};
}

ordered stats_json(const SolveStats& s) {
  ordered j;
  j["route"] = std::string(to_string(s.route));
  j["iterations_G"] = s.iterations_G;
  j["iterations_G_hat"] = s.iterations_G_hat;
  j["converged"] = s.converged;
  j["rate"] = num(s.rate);
  j["residuals"] = ordered{{"G", num(s.residual_G)},
                           {"R", num(s.residual_R)},
                           {"G_hat", num(s.residual_G_hat)},
                           {"R_hat", num(s.residual_R_hat)}};
  if (!s.error.empty()) j["error"] = s.error;
  return j;
}

std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::string exponent(double x) {
  if (!std::isfinite(x)) return "inf";
  if (x == 0.0) return "0";
  return "1e" + std::to_string(static_cast<int>(std::floor(std::log10(std::abs(x)))));
}

void print_matrix(std::ostringstream& os, const char* name, const Matrix& m) {
  os << "  " << name << " =\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << "    ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << fmt("% .12g", m(i, j)) << (j + 1 < m.cols() ? "  " : "");
    os << "\n";
  }
}

void print_stats(std::ostringstream& os, const char* label, const SolveStats& s) {
  os << label << ": route " << to_string(s.route) << ", iterations " << s.iterations_G << " / "
     << s.iterations_G_hat << (s.converged ? "" : " (not converged)") << ", rate " << fmt("%.3g", s.rate)
     << "\n";
  if (!s.error.empty()) {
    os << "  error: " << s.error << "\n";
    return;
  }
  os << "  residuals G " << fmt("%.2e", s.residual_G) << "  R " << fmt("%.2e", s.residual_R) << "  G-hat "
     << fmt("%.2e", s.residual_G_hat) << "  R-hat " << fmt("%.2e", s.residual_R_hat) << "\n";
}

}  // namespace

std::string to_json(const SolveReport& r, bool with_timing) {
  ordered j;
  j["schema"] = kReportSchema;
  j["source"] = r.source;
  j["n"] = r.n;
  if (r.name) j["name"] = *r.name;
  if (r.seed) j["seed"] = *r.seed;
  j["flags"] = ordered{{"via", std::string(to_string(r.flags.via))},
                       {"tol", num(r.flags.tol)},
                       {"max_iter", r.flags.max_iter},
                       {"samples", r.flags.samples}};
  j["exit_code"] = r.exit_code;
  if (!r.error.empty()) j["error"] = r.error;
  if (r.classified) {
    const Classification& c = r.classification;
    j["classification"] = ordered{{"kind", std::string(to_string(c.kind))},
                                  {"drift", num(c.drift)},
                                  {"xi_n", num(c.xi_n)},
                                  {"xi_n1", num(c.xi_n1)}};
    ordered roots = ordered::array();
    for (const Root& root : c.roots.roots) roots.push_back(root_json(root));
    j["roots"] = std::move(roots);
  }
  j["warnings"] = r.warnings;
  if (r.classified) j["direct"] = stats_json(r.direct);
  if (r.shifted) j["shifted"] = stats_json(*r.shifted);
  if (r.solution) {
    const SolutionSet& s = *r.solution;
    ordered sol;
    sol["G"] = matrix_json(s.G);
    sol["R"] = matrix_json(s.R);
    sol["G_hat"] = matrix_json(s.G_hat);
    sol["R_hat"] = matrix_json(s.R_hat);
    sol["K"] = matrix_json(s.K);
    sol["K_hat"] = matrix_json(s.K_hat);
    sol["W"] = s.W ? matrix_json(*s.W) : ordered(nullptr);
    j["solution"] = std::move(sol);
  }
  ordered certs = ordered::array();
  for (const Certificate& c : r.certificates) {
    ordered cj{{"name", c.name},
               {"verdict", std::string(to_string(c.verdict))},
               {"residual", num(c.residual)},
               {"tolerance", num(c.tolerance)}};
    if (!c.context.empty()) cj["context"] = c.context;
    certs.push_back(std::move(cj));
  }
  j["certificates"] = std::move(certs);
  j["failures"] = r.failures;
  if (with_timing) j["timing"] = ordered{{"elapsed_ms", num(r.elapsed_ms)}};
  return j.dump(2) + "\n";
}

std::string to_text(const SolveReport& r) {
  std::ostringstream os;
  os << r.source << " (n = " << r.n << ")";
  if (r.name) os << " " << *r.name;
  os << "\n";
  if (r.classified) {
    const Classification& c = r.classification;
    os << "class " << to_string(c.kind) << ", drift " << fmt("%.6g", c.drift) << ", xi_n " << fmt("%.12g", c.xi_n)
       << ", xi_n+1 " << fmt("%.12g", c.xi_n1) << "\n";
  }
  for (const std::string& w : r.warnings) os << "warning: " << w << "\n";
  if (!r.error.empty()) os << "error: " << r.error << "\n";
  if (r.classified) print_stats(os, "direct", r.direct);
  if (r.shifted) print_stats(os, "shifted", *r.shifted);
  if (r.solution) {
    const SolutionSet& s = *r.solution;
    if (r.n <= 8) {
      print_matrix(os, "G", s.G);
      print_matrix(os, "R", s.R);
      print_matrix(os, "G-hat", s.G_hat);
      print_matrix(os, "R-hat", s.R_hat);
      print_matrix(os, "K", s.K);
      print_matrix(os, "K-hat", s.K_hat);
      if (s.W) print_matrix(os, "W", *s.W);
    } else {
      os << "  residual exponents: G " << exponent(s.residual_G) << ", R " << exponent(s.residual_R)
         << ", G-hat " << exponent(s.residual_G_hat) << ", R-hat " << exponent(s.residual_R_hat) << "\n";
    }
  }
  if (!r.certificates.empty()) {
    std::size_t width = 0;
    for (const Certificate& c : r.certificates) width = std::max(width, c.name.size());
    os << "certificates:\n";
    for (const Certificate& c : r.certificates) {
      os << "  " << c.name << std::string(width - c.name.size() + 2, ' ') << to_string(c.verdict);
      if (c.verdict != Verdict::NotApplicable) os << "  " << fmt("%.2e", c.residual);
      if (c.verdict == Verdict::Pass || c.verdict == Verdict::Fail) os << " <= " << fmt("%.0e", c.tolerance);
      if (c.failed() && !c.context.empty()) os << "  (" << c.context << ")";
      os << "\n";
    }
    os << r.failures << " failed of " << r.certificates.size() << "\n";
  }
  os << "time " << fmt("%.1f", r.elapsed_ms) << " ms, exit " << r.exit_code << "\n";
  return os.str();
}

std::string to_json(const BenchReport& r, bool with_timing) {
  ordered j;
  j["schema"] = kReportSchema;
  j["flags"] = ordered{{"class", std::string(to_string(r.flags.kind))},
                       {"n", r.flags.n},
                       {"count", r.flags.count},
                       {"seed", r.flags.seed},
                       {"tol", num(r.flags.tol)},
                       {"max_iter", r.flags.max_iter},
                       {"drift", r.flags.drift ? num(*r.flags.drift) : ordered(nullptr)}};
  j["shift"] = std::string(to_string(r.kind));
  ordered list = ordered::array();
  for (const BenchInstance& b : r.instances) {
    ordered bj{{"seed", b.seed},
               {"drift", num(b.drift)},
               {"direct_iterations", b.direct_iterations},
               {"direct_converged", b.direct_converged},
               {"direct_accuracy", num(b.direct_accuracy)},
               {"shifted_iterations", b.shifted_iterations},
               {"shifted_converged", b.shifted_converged},
               {"shifted_accuracy", num(b.shifted_accuracy)},
               {"recovery_residual", num(b.recovery_residual)}};
    if (!b.error.empty()) bj["error"] = b.error;
    list.push_back(std::move(bj));
  }
  j["instances"] = std::move(list);
  j["summary"] = ordered{{"median_direct_iterations", num(r.median_direct_iterations)},
                         {"median_shifted_iterations", num(r.median_shifted_iterations)},
                         {"fraction_fewer_iterations", num(r.fraction_fewer_iterations)},
                         {"fraction_better_accuracy", num(r.fraction_better_accuracy)},
                         {"max_recovery_residual", num(r.max_recovery_residual)},
                         {"errors", r.errors}};
  if (with_timing) j["timing"] = ordered{{"elapsed_ms", num(r.elapsed_ms)}};
  return j.dump(2) + "\n";
}

std::string to_text(const BenchReport& r) {
  std::ostringstream os;
  os << "bench " << to_string(r.flags.kind) << ", n " << r.flags.n << ", " << r.flags.count << " instances from seed "
     << r.flags.seed << ", tol " << fmt("%.0e", r.flags.tol) << ", " << to_string(r.kind) << " shift\n";
  os << "  seed        drift   direct  accuracy   shifted  accuracy   recovery\n";
  for (const BenchInstance& b : r.instances) {
    os << "  " << b.seed;
    if (!b.error.empty()) {
      os << "  error: " << b.error << "\n";
      continue;
    }
    os << fmt("  % .3e", b.drift) << fmt("  %5.0f", b.direct_iterations) << (b.direct_converged ? " " : "*")
       << fmt(" %9.2e", b.direct_accuracy) << fmt("  %5.0f", b.shifted_iterations)
       << (b.shifted_converged ? " " : "*") << fmt(" %9.2e", b.shifted_accuracy)
       << fmt("  %9.2e", b.recovery_residual) << "\n";
  }
  os << "median iterations: direct " << fmt("%g", r.median_direct_iterations) << ", shifted "
     << fmt("%g", r.median_shifted_iterations) << "\n";
  os << "fewer iterations in " << fmt("%.0f", 100.0 * r.fraction_fewer_iterations) << "%, better accuracy in "
     << fmt("%.0f", 100.0 * r.fraction_better_accuracy) << "%\n";
  os << "max recovery residual " << fmt("%.2e", r.max_recovery_residual);
  if (r.errors) os << ", " << r.errors << " errors";
  os << "\n";
  return os.str();
}

}  // namespace qbd
