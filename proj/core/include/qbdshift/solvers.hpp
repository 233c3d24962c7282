#pragma once

// Minimal solutions G, R, G-hat, R-hat of the four quadratic matrix
// equations attached to B(z), and the factors K, K-hat, W.

#include <optional>
#include <vector>

#include "qbdshift/kernel.hpp"
#include "qbdshift/matpoly.hpp"

namespace qbd {

struct CrOptions {
  double tol = 1e-13;
  int max_iter = 64;
  /// When false, hitting max_iter returns the current iterate with
  /// converged = false instead of throwing ConvergenceError.
  bool require_convergence = true;
};

struct CrResult {
  Matrix G;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;           // ||B_{-1} + B_0 G + B_1 G^2||_inf
  std::vector<double> off_norms;  // min(||B_{-1}^(k)||, ||B_1^(k)||) per step
  double rate = 0.0;               // last ratio of successive off_norms
};

/// Cyclic reduction for the solution of B_{-1} + B_0 X + B_1 X^2 = 0 with
/// minimal spectral radius.  Throws SingularMatrixError (with the step
/// index in the message) on a singular pivot block.
CrResult solve_min_G(const QuadMatPoly& poly, const CrOptions& options = {});

struct OracleResult {
  Matrix G;
  long iterations = 0;
  bool converged = false;
};

/// Natural fixed-point iteration X <- B_{-1} + (B_0 + I) X + B_1 X^2 from
/// X = 0.  Stops once the estimated distance to the limit,
/// 4 * increment / (1 - ratio), is at most tol; the ratio is averaged over 32 steps.
OracleResult solve_min_G_oracle(const QuadMatPoly& poly, double tol, long max_iter = 50'000'000);

struct RK {
  Matrix R;
  Matrix K;
};

/// K = B_0 + B_1 G and R = -B_1 K^{-1}.  With `clamp`, entries of R down to
/// -1e-12 ||R|| are set to zero and anything more negative throws.
RK derive_R_K(const QuadMatPoly& poly, const Matrix& g, bool clamp = true);

struct HatPair {
  Matrix G_hat;
  Matrix R_hat;
  Matrix K_hat;
  int iterations = 0;
};

/// G-hat from the reversed polynomial, K-hat = B_0 + B_{-1} G-hat,
/// R-hat = -B_{-1} K-hat^{-1}.
HatPair solve_hat_pair(const QuadMatPoly& poly, const CrOptions& options = {}, bool clamp = true);

/// W = sum_i G^i K^{-1} R^i.  Throws NullRecurrenceError when rho(G) rho(R) >= 1
/// and SingularMatrixError when W is singular.
Matrix compute_W(const Matrix& g, const Matrix& k, const Matrix& r);

struct HatsFromW {
  Matrix G_hat;  // W R W^{-1}
  Matrix R_hat;  // W^{-1} G W
};
HatsFromW hats_from_W(const Matrix& w, const Matrix& g, const Matrix& r);

/// Residuals of the four equations.
double residual_G(const QuadMatPoly& poly, const Matrix& x);     // B_{-1} + B_0 X + B_1 X^2
double residual_R(const QuadMatPoly& poly, const Matrix& x);     // B_1 + X B_0 + X^2 B_{-1}
double residual_Ghat(const QuadMatPoly& poly, const Matrix& x);  // B_{-1} X^2 + B_0 X + B_1
double residual_Rhat(const QuadMatPoly& poly, const Matrix& x);  // B_{-1} + X B_0 + X^2 B_1

struct SolutionSet {
  Matrix G, R, G_hat, R_hat, K, K_hat;
  std::optional<Matrix> W;
  int iterations_G = 0;
  int iterations_G_hat = 0;
  double residual_G = 0.0;
  double residual_R = 0.0;
  double residual_G_hat = 0.0;
  double residual_R_hat = 0.0;

  double max_residual() const;
  /// Fills the four residual fields from `poly`.
  void update_residuals(const QuadMatPoly& poly);
};

inline constexpr double kWGap = 1e-6;

/// Cyclic reduction on both sides.  W is attached when 1 - rho(G) rho(R) > kWGap.
SolutionSet solve_direct(const QuadMatPoly& poly, const CrOptions& options = {}, bool clamp = true);

}  // namespace qbd
