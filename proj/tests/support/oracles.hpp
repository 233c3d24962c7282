#pragma once

// Reference computations that share no code with the library: closed forms
// for scalar problems, plain fixed-point iterations, truncated series and a
// root finder built on determinant interpolation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Smallest nonnegative root of a x^2 + b x + c = 0 (a, c >= 0, b < 0).
inline double min_root(double a, double b, double c) {
  if (a == 0.0) return -c / b;
  const double disc = std::max(b * b - 4.0 * a * c, 0.0);
  // Stable form of (-b - sqrt(disc)) / (2a).
  return 2.0 * c / (-b + std::sqrt(disc));
}

struct Scalar {
  double G, R, G_hat, R_hat, K, K_hat;
};

/// Minimal solutions for a scalar QBD (a_minus, a_zero, a_plus).
inline Scalar scalar_solution(double am, double a0, double ap) {
  Scalar s;
  const double b0 = a0 - 1.0;
  s.G = min_root(ap, b0, am);
  s.R = min_root(am, b0, ap);
  s.G_hat = min_root(am, b0, ap);
  s.R_hat = min_root(ap, b0, am);
  s.K = b0 + ap * s.G;
  s.K_hat = b0 + am * s.G_hat;
  return s;
}

inline double norm_inf(const Matrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

/// X <- -(B_0 + B_1 X)^{-1} B_{-1} from X = 0.  Linear convergence, so this
/// is slow but monotone and independent of any doubling scheme.
inline Matrix natural_G(const Matrix& bm, const Matrix& b0, const Matrix& bp, double tol = 1e-15,
                        long max_iter = 2'000'000) {
  Matrix x = Matrix::Zero(b0.rows(), b0.cols());
  for (long k = 0; k < max_iter; ++k) {
    Matrix next = -(b0 + bp * x).fullPivLu().solve(bm);
    const double inc = (next - x).cwiseAbs().maxCoeff();
    x = std::move(next);
    if (inc <= tol) break;
  }
  return x;
}

/// sum_k G^k C R^k, truncated once a term is negligible.
inline Matrix stein_series(const Matrix& g, const Matrix& r, const Matrix& c, long max_terms = 1'000'000) {
  Matrix sum = c;
  Matrix term = c;
  for (long k = 0; k < max_terms; ++k) {
    term = g * term * r;
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * std::max(1.0, sum.cwiseAbs().maxCoeff())) break;
  }
  return sum;
}

inline double spectral_radius(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// One root of det(B_{-1} + z B_0 + z^2 B_1); infinite when the degree drops.
struct Root {
  Complex z;
  bool infinite = false;
};

/// Coefficients of p(z) = det(B(z)) by interpolation at the 2n+1 scaled
/// roots of unity, then Durand-Kerner on the trimmed polynomial.
inline std::vector<Root> det_roots(const Matrix& bm, const Matrix& b0, const Matrix& bp) {
  const int n = static_cast<int>(b0.rows());
  const int deg = 2 * n;
  const int m = deg + 1;
  const double pi = std::acos(-1.0);
  std::vector<Complex> values(m);
  for (int k = 0; k < m; ++k) {
    const Complex z = std::polar(1.0, 2.0 * pi * k / m);
    CMatrix b = bm.cast<Complex>() + z * b0.cast<Complex>() + (z * z) * bp.cast<Complex>();
    values[k] = b.fullPivLu().determinant();
  }
  std::vector<double> coeff(m);
  for (int j = 0; j < m; ++j) {
    Complex c = 0.0;
    for (int k = 0; k < m; ++k) c += values[k] * std::polar(1.0, -2.0 * pi * j * k / m);
    coeff[j] = (c / static_cast<double>(m)).real();
  }
  double scale = 0.0;
  for (double c : coeff) scale = std::max(scale, std::abs(c));
  int top = deg;
  while (top > 0 && std::abs(coeff[top]) <= 1e-11 * scale) --top;
  std::vector<Root> out;
  if (top > 0) {
    std::vector<Complex> z(top);
    for (int i = 0; i < top; ++i) z[i] = std::pow(Complex(0.4, 0.9), i) * 1.1;
    auto eval = [&](Complex x) {
      Complex acc = 0.0;
      for (int j = top; j >= 0; --j) acc = acc * x + coeff[j];
      return acc / coeff[top];
    };
    for (int it = 0; it < 5000; ++it) {
      double move = 0.0;
      for (int i = 0; i < top; ++i) {
        Complex denom = 1.0;
        for (int j = 0; j < top; ++j) {
          if (j != i) denom *= z[i] - z[j];
        }
        const Complex step = eval(z[i]) / denom;
        z[i] -= step;
        move = std::max(move, std::abs(step));
      }
      if (move < 1e-15) break;
    }
    for (const Complex& x : z) out.push_back({x, false});
  }
  for (int i = top; i < deg; ++i) out.push_back({0.0, true});
  return out;
}

/// Largest distance after greedy matching; infinite roots only match each other.
/// Finite roots are compared by |a - b| / max(1, |a|).
inline double root_distance(std::vector<Root> a, std::vector<Root> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  std::vector<bool> used(b.size(), false);
  for (const Root& x : a) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t pick = b.size();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      double d;
      if (x.infinite || b[j].infinite) {
        if (x.infinite && b[j].infinite) {
          d = 0.0;
        } else {
          const Complex f = x.infinite ? b[j].z : x.z;
          d = 1.0 / std::max(std::abs(f), 1e-300);
        }
      } else {
        d = std::abs(x.z - b[j].z) / std::max(1.0, std::abs(x.z));
      }
      if (d < best) {
        best = d;
        pick = j;
      }
    }
    used[pick] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace oracle
