#include "qbdshift/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qbdshift/errors.hpp"

namespace qbd {

namespace {

constexpr double kClampSlack = 1e-12;

void clamp_nonnegative(Matrix& m, const char* what) {
  const double floor = -kClampSlack * std::max(m.cwiseAbs().maxCoeff(), 1.0);
  if (m.minCoeff() < floor) {
    throw VerificationError(std::string(what) + " has an entry below " + std::to_string(floor) +
                            "; not a minimal nonnegative solution");
  }
  m = m.cwiseMax(0.0);
}

}  // namespace

CrResult solve_min_G(const QuadMatPoly& poly, const CrOptions& options) {
  poly.check_regular();
  const Eigen::Index n = poly.n();
  Matrix am = poly.b_minus;
  Matrix a0 = poly.b_zero;
  Matrix ap = poly.b_plus;
  Matrix ahat = poly.b_zero;

  CrResult out;
  double off = std::min(inf_norm(am), inf_norm(ap));
  while (off > options.tol && out.iterations < options.max_iter) {
    Matrix rhs(n, 2 * n);
    rhs << am, ap;
    Matrix xy;
    try {
      xy = solve_linear(a0, rhs);
    } catch (const SingularMatrixError&) {
      throw SingularMatrixError("cyclic reduction: singular pivot block at step " +
                                std::to_string(out.iterations + 1));
    }
    const Matrix x = xy.leftCols(n);
    const Matrix y = xy.rightCols(n);
    const Matrix ap_x = ap * x;
    a0 -= am * y + ap_x;
    ahat -= ap_x;
    am = (-am * x).eval();
    ap = (-ap * y).eval();
    ++out.iterations;
    const double next = std::min(inf_norm(am), inf_norm(ap));
    if (!std::isfinite(next)) {
      throw ConvergenceError("cyclic reduction: non-finite iterate at step " + std::to_string(out.iterations),
                             out.iterations, next);
    }
    out.rate = off > 0.0 ? next / off : 0.0;
    off = next;
    out.off_norms.push_back(off);
  }
  out.converged = off <= options.tol;
  try {
    out.G = -solve_linear(ahat, poly.b_minus);
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError("cyclic reduction: singular final block after " +
                              std::to_string(out.iterations) + " steps");
  }
  out.residual = residual_G(poly, out.G);
  if (!out.converged && options.require_convergence) {
    throw ConvergenceError("cyclic reduction: no convergence in " + std::to_string(options.max_iter) +
                               " steps (residual " + std::to_string(out.residual) + ")",
                           out.iterations, out.residual);
  }
  return out;
}

OracleResult solve_min_G_oracle(const QuadMatPoly& poly, double tol, long max_iter) {
  // The contraction ratio is measured over a window; one-step ratios are
  // too noisy near the fixed point of a null recurrent chain.
  constexpr long kWindow = 32;
  const Eigen::Index n = poly.n();
  const Matrix a0 = poly.b_zero + identity(n);
  OracleResult out;
  out.G = Matrix::Zero(n, n);
  double checkpoint = std::numeric_limits<double>::infinity();
  for (long k = 0; k < max_iter; ++k) {
    Matrix next = poly.b_minus + a0 * out.G + poly.b_plus * out.G * out.G;
    const double inc = (next - out.G).cwiseAbs().maxCoeff();
    out.G = std::move(next);
    out.iterations = k + 1;
    if (inc == 0.0) {
      out.converged = true;
      break;
    }
    if (out.iterations % kWindow != 0) continue;
    const double ratio = std::pow(inc / checkpoint, 1.0 / kWindow);
    checkpoint = inc;
    if (ratio < 1.0 && 4.0 * inc <= tol * (1.0 - ratio)) {
      out.converged = true;
      break;
    }
  }
  return out;
}

RK derive_R_K(const QuadMatPoly& poly, const Matrix& g, bool clamp) {
  RK out;
  out.K = poly.b_zero + poly.b_plus * g;
  try {
    out.R = solve_linear_right(-poly.b_plus, out.K);
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError("derive_R_K: K = B_0 + B_1 G is singular");
  }
  if (clamp) clamp_nonnegative(out.R, "R");
  return out;
}

HatPair solve_hat_pair(const QuadMatPoly& poly, const CrOptions& options, bool clamp) {
  const QuadMatPoly rev = poly.reversed();
  CrResult cr = solve_min_G(rev, options);
  if (clamp) clamp_nonnegative(cr.G, "G-hat");
  RK rk = derive_R_K(rev, cr.G, clamp);
  return {std::move(cr.G), std::move(rk.R), std::move(rk.K), cr.iterations};
}

Matrix compute_W(const Matrix& g, const Matrix& k, const Matrix& r) {
  Matrix w = stein_solve(g, r, inverse(k));
  try {
    (void)inverse(w);
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError("compute_W: W is singular");
  }
  return w;
}

HatsFromW hats_from_W(const Matrix& w, const Matrix& g, const Matrix& r) {
  HatsFromW out;
  try {
    out.G_hat = solve_linear_right(w * r, w);
    out.R_hat = solve_linear(w, g * w);
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError("hats_from_W: W is singular");
  }
  return out;
}

double residual_G(const QuadMatPoly& poly, const Matrix& x) {
  return inf_norm(Matrix(poly.b_minus + poly.b_zero * x + poly.b_plus * x * x));
}

double residual_R(const QuadMatPoly& poly, const Matrix& x) {
  return inf_norm(Matrix(poly.b_plus + x * poly.b_zero + x * x * poly.b_minus));
}

double residual_Ghat(const QuadMatPoly& poly, const Matrix& x) {
  return inf_norm(Matrix(poly.b_minus * x * x + poly.b_zero * x + poly.b_plus));
}

double residual_Rhat(const QuadMatPoly& poly, const Matrix& x) {
  return inf_norm(Matrix(poly.b_minus + x * poly.b_zero + x * x * poly.b_plus));
}

double SolutionSet::max_residual() const {
  return std::max({residual_G, residual_R, residual_G_hat, residual_R_hat});
}

void SolutionSet::update_residuals(const QuadMatPoly& poly) {
  residual_G = qbd::residual_G(poly, G);
  residual_R = qbd::residual_R(poly, R);
  residual_G_hat = qbd::residual_Ghat(poly, G_hat);
  residual_R_hat = qbd::residual_Rhat(poly, R_hat);
}

SolutionSet solve_direct(const QuadMatPoly& poly, const CrOptions& options, bool clamp) {
  SolutionSet sol;
  CrResult cr = solve_min_G(poly, options);
  if (clamp) clamp_nonnegative(cr.G, "G");
  RK rk = derive_R_K(poly, cr.G, clamp);
  HatPair hat = solve_hat_pair(poly, options, clamp);
  sol.G = std::move(cr.G);
  sol.R = std::move(rk.R);
  sol.K = std::move(rk.K);
  sol.G_hat = std::move(hat.G_hat);
  sol.R_hat = std::move(hat.R_hat);
  sol.K_hat = std::move(hat.K_hat);
  sol.iterations_G = cr.iterations;
  sol.iterations_G_hat = hat.iterations;
  try {
    if (1.0 - spectral_radius(sol.G) * spectral_radius(sol.R) > kWGap) sol.W = compute_W(sol.G, sol.K, sol.R);
  } catch (const NullRecurrenceError&) {
  } catch (const SingularMatrixError&) {
  }
  sol.update_residuals(poly);
  return sol;
}

}  // namespace qbd
