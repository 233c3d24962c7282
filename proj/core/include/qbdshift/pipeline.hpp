#pragma once

// End-to-end solve and bench runs behind the command line tool.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbdshift/model.hpp"
#include "qbdshift/model_io.hpp"
#include "qbdshift/shift.hpp"
#include "qbdshift/solvers.hpp"
#include "qbdshift/verify.hpp"

namespace qbd {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitParse = 2,
  kExitValidation = 3,
  kExitSolver = 4,
  kExitCertificate = 5,
};

struct SolveFlags {
  Route via = Route::Auto;
  double tol = 1e-13;
  int max_iter = 64;
  int samples = kDefaultSamples;
};

struct SolveStats {
  Route route = Route::Direct;
  int iterations_G = 0;
  int iterations_G_hat = 0;
  bool converged = false;
  double rate = 0.0;
  double residual_G = 0.0, residual_R = 0.0, residual_G_hat = 0.0, residual_R_hat = 0.0;
  std::string error;  // set when the solve threw
};

struct SolveReport {
  std::string source;
  Eigen::Index n = 0;
  std::optional<std::string> name;
  std::optional<std::uint64_t> seed;
  SolveFlags flags;

  bool classified = false;
  Classification classification;
  std::vector<std::string> warnings;

  SolveStats direct;
  std::optional<SolveStats> shifted;  // absent for --via direct
  std::optional<SolutionSet> solution;
  std::vector<Certificate> certificates;
  std::size_t failures = 0;

  double elapsed_ms = 0.0;
  int exit_code = kExitOk;
  std::string error;
};

/// validate -> classify -> direct solve (always, never fatal) -> solve by
/// the requested route -> certificates.  Errors land in the report.
SolveReport run_solve(const ModelFile& file, const SolveFlags& flags, const std::string& source);

struct BenchFlags {
  Recurrence kind = Recurrence::NullRecurrent;
  Eigen::Index n = 8;
  int count = 50;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  int max_iter = 64;
  std::optional<double> drift;
};

struct BenchInstance {
  std::uint64_t seed = 0;
  double drift = 0.0;
  int direct_iterations = 0;
  bool direct_converged = false;
  double direct_accuracy = 0.0;
  int shifted_iterations = 0;
  bool shifted_converged = false;
  double shifted_accuracy = 0.0;
  double recovery_residual = 0.0;
  std::string error;
};

struct BenchReport {
  BenchFlags flags;
  ShiftKind kind = ShiftKind::Double;
  std::vector<BenchInstance> instances;
  double median_direct_iterations = 0.0;
  double median_shifted_iterations = 0.0;
  double fraction_fewer_iterations = 0.0;
  double fraction_better_accuracy = 0.0;
  double max_recovery_residual = 0.0;
  std::size_t errors = 0;
  double elapsed_ms = 0.0;
};

/// Accuracy of a (G, R) pair: the larger equation residual, and for
/// recurrent chains also ||G e - e||_inf.
double solution_accuracy(const QuadMatPoly& poly, const Matrix& g, const Matrix& r, Recurrence kind);

/// Instance i uses seed + i.  Direct cyclic reduction against the auto-kind
/// shift with a-priori vectors, same tol and max_iter, then recovery.
BenchReport run_bench(const BenchFlags& flags);

}  // namespace qbd
