#include "qbdshift/matpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qbdshift/errors.hpp"

namespace qbd {

namespace {

// Pencil eigenvalues with |beta| <= kInfiniteRatio |alpha| count as infinite.
constexpr double kInfiniteRatio = 1e-12;
// Moduli closer than this (relative) are treated as ties when ordering.
constexpr double kTieRelative = 1e-10;

bool is_real_positive(const Root& r) {
  return !r.infinite && r.value.real() > 0.0 &&
         std::abs(r.value.imag()) <= 1e-10 * std::max(1.0, std::abs(r.value));
}

void sort_roots(std::vector<Root>& roots) {
  std::stable_sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
    if (a.infinite != b.infinite) return !a.infinite;
    return a.modulus() < b.modulus();
  });
  // Within a run of equal moduli, push real positive roots to the end.
  std::size_t i = 0;
  while (i < roots.size()) {
    std::size_t j = i + 1;
    if (!roots[i].infinite) {
      const double m = roots[i].modulus();
      while (j < roots.size() && !roots[j].infinite &&
             roots[j].modulus() - m <= kTieRelative * std::max(1.0, m)) {
        ++j;
      }
      std::stable_partition(roots.begin() + static_cast<std::ptrdiff_t>(i),
                            roots.begin() + static_cast<std::ptrdiff_t>(j),
                            [](const Root& r) { return !is_real_positive(r); });
    } else {
      j = roots.size();
    }
    i = j;
  }
}

}  // namespace

QuadMatPoly QuadMatPoly::from_blocks(const Matrix& a_minus, const Matrix& a_zero,
                                     const Matrix& a_plus) {
  return {a_minus, a_zero - identity(a_zero.rows()), a_plus};
}

void QuadMatPoly::check_regular() const {
  const Eigen::Index size = n();
  if (size < 1 || b_zero.cols() != size || b_minus.rows() != size || b_minus.cols() != size ||
      b_plus.rows() != size || b_plus.cols() != size) {
    throw DimensionError("QuadMatPoly: coefficients must be n x n with n >= 1");
  }
  if (!b_minus.allFinite() || !b_zero.allFinite() || !b_plus.allFinite()) {
    throw DimensionError("QuadMatPoly: non-finite coefficient");
  }
  const Complex points[3] = {{0.3, 0.7}, {-0.55, 0.2}, {1.3, -0.4}};
  for (const Complex& z : points) {
    const Vector sv = Eigen::BDCSVD<CMatrix>(eval_B(*this, z)).singularValues();
    if (sv(0) > 0.0 && sv(size - 1) > 1e-13 * sv(0)) return;
  }
  throw SingularMatrixError("QuadMatPoly: det B(z) vanishes identically");
}

double Root::modulus() const {
  return infinite ? std::numeric_limits<double>::infinity() : std::abs(value);
}

std::size_t RootSet::infinite_count() const {
  return static_cast<std::size_t>(
      std::count_if(roots.begin(), roots.end(), [](const Root& r) { return r.infinite; }));
}

RootSet sorted_root_set(std::vector<Root> roots) {
  sort_roots(roots);
  return RootSet{std::move(roots)};
}

RootSet reciprocal(const RootSet& set) {
  std::vector<Root> out;
  out.reserve(set.size());
  for (const Root& r : set.roots) {
    if (r.infinite) {
      out.push_back(Root{});
    } else if (r.value == Complex(0.0, 0.0)) {
      out.push_back(Root{Complex{}, true});
    } else {
      out.push_back(Root{1.0 / r.value, false});
    }
  }
  return sorted_root_set(std::move(out));
}

CMatrix eval_B(const QuadMatPoly& poly, Complex z) {
  return poly.b_minus.cast<Complex>() + z * poly.b_zero.cast<Complex>() +
         (z * z) * poly.b_plus.cast<Complex>();
}

CMatrix eval_phi(const QuadMatPoly& poly, Complex z, bool reversed) {
  if (z == Complex(0.0, 0.0)) throw DimensionError("eval_phi: z = 0");
  const Complex w = reversed ? 1.0 / z : z;
  return (1.0 / w) * poly.b_minus.cast<Complex>() + poly.b_zero.cast<Complex>() +
         w * poly.b_plus.cast<Complex>();
}

Complex det_B(const QuadMatPoly& poly, Complex z) { return eval_B(poly, z).partialPivLu().determinant(); }

RootSet roots(const QuadMatPoly& poly) {
  const Eigen::Index n = poly.n();
  Matrix a = Matrix::Zero(2 * n, 2 * n);
  Matrix b = Matrix::Zero(2 * n, 2 * n);
  a.topRightCorner(n, n) = identity(n);
  a.bottomLeftCorner(n, n) = -poly.b_minus;
  a.bottomRightCorner(n, n) = -poly.b_zero;
  b.topLeftCorner(n, n) = identity(n);
  b.bottomRightCorner(n, n) = poly.b_plus;

  Eigen::GeneralizedEigenSolver<Matrix> ges(a, b, /*computeEigenvectors=*/false);
  if (ges.info() != Eigen::Success) throw ConvergenceError("roots: QZ iteration failed", 0, 0.0);
  const auto alphas = ges.alphas();
  const auto betas = ges.betas();
  const double scale = std::max({inf_norm(a), inf_norm(b), 1e-300});

  RootSet out;
  out.roots.reserve(static_cast<std::size_t>(2 * n));
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    const Complex alpha = alphas(i);
    const double beta = betas(i);
    if (std::abs(alpha) <= 1e-13 * scale && std::abs(beta) <= 1e-13 * scale) {
      throw SingularMatrixError("roots: singular pencil, det B(z) vanishes identically");
    }
    Root r;
    if (std::abs(beta) <= kInfiniteRatio * std::abs(alpha)) {
      r.infinite = true;
    } else {
      r.value = alpha / beta;
    }
    out.roots.push_back(r);
  }
  sort_roots(out.roots);
  return out;
}

double chordal_distance(const Root& a, const Root& b) {
  if (a.infinite && b.infinite) return 0.0;
  if (a.infinite) return 1.0 / std::sqrt(1.0 + std::norm(b.value));
  if (b.infinite) return 1.0 / std::sqrt(1.0 + std::norm(a.value));
  return std::abs(a.value - b.value) /
         (std::sqrt(1.0 + std::norm(a.value)) * std::sqrt(1.0 + std::norm(b.value)));
}

double root_set_distance(const std::vector<Root>& a, const std::vector<Root>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<char> used(b.size(), 0);
  std::vector<char> done(a.size(), 0);
  double worst = 0.0;
  // Match the best-separated pairs first so clusters do not steal partners.
  std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> pairs;
  pairs.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) pairs.push_back({chordal_distance(a[i], b[j]), {i, j}});
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::size_t matched = 0;
  for (const auto& [d, ij] : pairs) {
    if (done[ij.first] || used[ij.second]) continue;
    done[ij.first] = 1;
    used[ij.second] = 1;
    worst = std::max(worst, d);
    if (++matched == a.size()) break;
  }
  return worst;
}

LaurentSeries h_coefficients(const Matrix& g, const Matrix& k, const Matrix& r, int first_index,
                             int last_index) {
  if (first_index > last_index) throw DimensionError("h_coefficients: empty index range");
  const Matrix h0 = stein_solve(g, r, inverse(k));
  LaurentSeries series;
  series.first_index = first_index;
  for (int i = first_index; i <= last_index; ++i) {
    Matrix h = h0;
    if (i < 0) {
      for (int p = 0; p < -i; ++p) h = (g * h).eval();
    } else {
      for (int p = 0; p < i; ++p) h = (h * r).eval();
    }
    series.coefficients.push_back(std::move(h));
  }
  return series;
}

Factorization Factorization::make(Direction direction, Matrix left_factor, Matrix middle,
                                  Matrix right_factor, double tolerance) {
  Factorization f;
  f.direction = direction;
  // Singular middle factors are rejected here.
  (void)inverse(middle);
  const double rho_left = spectral_radius(left_factor);
  const double rho_right = spectral_radius(right_factor);
  if (rho_left > 1.0 + tolerance || rho_right > 1.0 + tolerance) {
    throw VerificationError("Factorization: outer factor with spectral radius above one");
  }
  f.strength = (rho_left < 1.0 - tolerance && rho_right < 1.0 - tolerance) ? Strength::Canonical
                                                                           : Strength::WeakCanonical;
  f.left_factor = std::move(left_factor);
  f.middle = std::move(middle);
  f.right_factor = std::move(right_factor);
  return f;
}

std::vector<Complex> unit_circle_samples(int samples) {
  std::vector<Complex> zs;
  zs.reserve(static_cast<std::size_t>(std::max(samples, 0)));
  for (int k = 0; k < samples; ++k) {
    zs.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / samples));
  }
  return zs;
}

double factorization_residual(const QuadMatPoly& poly, const Factorization& f, int samples) {
  const Eigen::Index n = poly.n();
  const CMatrix eye = CMatrix::Identity(n, n);
  const CMatrix left = f.left_factor.cast<Complex>();
  const CMatrix middle = f.middle.cast<Complex>();
  const CMatrix right = f.right_factor.cast<Complex>();
  const bool reversed = f.direction == Direction::ReversedZ;
  double worst = 0.0;
  for (const Complex& z : unit_circle_samples(samples)) {
    const CMatrix product = (eye - z * left) * middle * (eye - (1.0 / z) * right);
    worst = std::max(worst, inf_norm(CMatrix(eval_phi(poly, z, reversed) - product)));
  }
  return worst;
}

}  // namespace qbd
