#include "qbdshift/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "qbdshift/errors.hpp"
#include "qbdshift/generator.hpp"

namespace qbd {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

SolveStats stats_of(const SolveResult& res) {
  SolveStats s;
  s.route = res.g_side.route;
  s.iterations_G = res.g_side.iterations;
  s.iterations_G_hat = res.hat_side.iterations;
  s.converged = res.g_side.converged && res.hat_side.converged;
  s.rate = std::max(res.g_side.rate, res.hat_side.rate);
  s.residual_G = res.solution.residual_G;
  s.residual_R = res.solution.residual_R;
  s.residual_G_hat = res.solution.residual_G_hat;
  s.residual_R_hat = res.solution.residual_R_hat;
  return s;
}

double median(std::vector<double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

}  // namespace

SolveReport run_solve(const ModelFile& file, const SolveFlags& flags, const std::string& source) {
  const auto start = Clock::now();
  SolveReport rep;
  rep.source = source;
  rep.n = file.n;
  rep.name = file.name;
  rep.seed = file.seed;
  rep.flags = flags;
  auto finish = [&](int code, std::string error = {}) {
    rep.exit_code = code;
    rep.error = std::move(error);
    rep.elapsed_ms = elapsed_ms(start);
    return rep;
  };

  std::optional<QbdTriple> model;
  PerronData perron;
  try {
    model = validate(file.a_minus, file.a_zero, file.a_plus);
    rep.warnings = model->warnings();
    rep.classification = classify(*model);
    rep.classified = true;
    perron = perron_data(*model, rep.classification);
  } catch (const Error& e) {
    return finish(kExitValidation, e.what());
  }
  const Classification& cls = rep.classification;

  SolveOptions direct_opts;
  direct_opts.route = Route::Direct;
  direct_opts.cr.tol = flags.tol;
  direct_opts.cr.max_iter = flags.max_iter;
  direct_opts.cr.require_convergence = false;
  std::optional<SolveResult> direct;
  try {
    direct = solve(*model, cls, perron, direct_opts);
    rep.direct = stats_of(*direct);
  } catch (const Error& e) {
    rep.direct.error = e.what();
    if (flags.via == Route::Direct) return finish(kExitSolver, e.what());
  }

  std::optional<SolveResult> routed;
  if (flags.via != Route::Direct) {
    SolveOptions opts;
    opts.route = flags.via;
    opts.cr.tol = flags.tol;
    opts.cr.max_iter = flags.max_iter;
    try {
      routed = solve(*model, cls, perron, opts);
      rep.shifted = stats_of(*routed);
    } catch (const Error& e) {
      SolveStats failed;
      failed.route = flags.via == Route::Auto ? Route::Auto : flags.via;
      failed.error = e.what();
      rep.shifted = failed;
      return finish(kExitSolver, e.what());
    }
  }
  rep.solution = routed ? routed->solution : direct->solution;
  const SolutionSet& sol = *rep.solution;

  try {
    const PerronData full = perron.with_solutions(sol.G, sol.R, sol.G_hat, sol.R_hat);
    CrOptions cr;
    cr.tol = flags.tol;
    cr.max_iter = flags.max_iter;
    const std::vector<ShiftCase> cases = build_shift_cases(*model, cls, full, sol, cr);
    SuiteOptions suite;
    suite.samples = flags.samples;
    rep.certificates = check_identity_suite(*model, cls, full, sol, cases, suite);
  } catch (const Error& e) {
    rep.certificates.push_back(certify("certification", std::numeric_limits<double>::infinity(), 0.0, e.what()));
  }
  rep.failures = count_failures(rep.certificates);
  return finish(rep.failures ? kExitCertificate : kExitOk);
}

double solution_accuracy(const QuadMatPoly& poly, const Matrix& g, const Matrix& r, Recurrence kind) {
  double acc = std::max(residual_G(poly, g), residual_R(poly, r));
  if (kind != Recurrence::Transient) {
    const Vector e = Vector::Ones(g.rows());
    acc = std::max(acc, (g * e - e).cwiseAbs().maxCoeff());
  }
  return acc;
}

BenchReport run_bench(const BenchFlags& flags) {
  const auto start = Clock::now();
  BenchReport rep;
  rep.flags = flags;
  rep.kind = auto_kind(flags.kind);
  CrOptions cr;
  cr.tol = flags.tol;
  cr.max_iter = flags.max_iter;
  cr.require_convergence = false;

  std::vector<double> direct_its, shifted_its;
  std::size_t fewer = 0, better = 0;
  for (int i = 0; i < flags.count; ++i) {
    BenchInstance inst;
    inst.seed = flags.seed + static_cast<std::uint64_t>(i);
    try {
      GenOptions gen;
      gen.kind = flags.kind;
      gen.n = flags.n;
      gen.seed = inst.seed;
      gen.drift = flags.drift;
      const GeneratedModel gm = generate(gen);
      const QbdTriple model = validate(gm.a_minus, gm.a_zero, gm.a_plus);
      const Classification cls = classify(model);
      inst.drift = cls.drift;
      const PerronData perron = perron_data(model, cls);
      const QuadMatPoly poly = model.poly();

      const CrResult d = solve_min_G(poly, cr);
      const RK drk = derive_R_K(poly, d.G, false);
      inst.direct_iterations = d.iterations;
      inst.direct_converged = d.converged;
      inst.direct_accuracy = solution_accuracy(poly, d.G, drk.R, cls.kind);

      const FreeVectors fv = a_priori_vectors(perron);
      const ShiftTransform t = build_shift(rep.kind, model, cls, perron, fv.v, fv.w);
      const QuadMatPoly shifted = t.poly();
      const CrResult s = solve_min_G(shifted, cr);
      const RK srk = derive_R_K(shifted, s.G, false);
      const RecoveredGR rec =
          recover_GR(s.G, srk.R, t, poly, std::numeric_limits<double>::infinity());
      inst.shifted_iterations = s.iterations;
      inst.shifted_converged = s.converged;
      inst.recovery_residual = std::max(rec.residual_G, rec.residual_R);
      inst.shifted_accuracy = solution_accuracy(poly, rec.G, rec.R, cls.kind);

      direct_its.push_back(inst.direct_iterations);
      shifted_its.push_back(inst.shifted_iterations);
      if (inst.shifted_iterations < inst.direct_iterations) ++fewer;
      if (inst.shifted_accuracy < inst.direct_accuracy) ++better;
      rep.max_recovery_residual = std::max(rep.max_recovery_residual, inst.recovery_residual);
    } catch (const Error& e) {
      inst.error = e.what();
      ++rep.errors;
    }
    rep.instances.push_back(std::move(inst));
  }
  rep.median_direct_iterations = median(direct_its);
  rep.median_shifted_iterations = median(shifted_its);
  const double total = flags.count > 0 ? static_cast<double>(flags.count) : 1.0;
  rep.fraction_fewer_iterations = static_cast<double>(fewer) / total;
  rep.fraction_better_accuracy = static_cast<double>(better) / total;
  rep.elapsed_ms = elapsed_ms(start);
  return rep;
}

}  // namespace qbd
