#pragma once

// Quadratic matrix polynomials B(z) = B_{-1} + z B_0 + z^2 B_1 and the
// Laurent polynomials phi(z) = z^{-1} B(z).

#include <cstddef>
#include <vector>

#include "qbdshift/kernel.hpp"

namespace qbd {

struct QuadMatPoly {
  Matrix b_minus;
  Matrix b_zero;
  Matrix b_plus;

  Eigen::Index n() const { return b_zero.rows(); }

  /// B(z) = A_{-1} + z (A_0 - I) + z^2 A_1.
  static QuadMatPoly from_blocks(const Matrix& a_minus, const Matrix& a_zero, const Matrix& a_plus);

  /// z^2 B(1/z): swaps B_{-1} and B_1.
  QuadMatPoly reversed() const { return {b_plus, b_zero, b_minus}; }

  /// Throws DimensionError on shape mismatch and SingularMatrixError when
  /// B(z) is numerically singular (sigma_min < 1e-13 sigma_max) at three fixed off-axis sample points.
  void check_regular() const;
};

/// One root of det B(z); `infinite` roots carry value = 0.
struct Root {
  Complex value;
  bool infinite = false;

  double modulus() const;
};

/// All 2n roots ordered by nondecreasing modulus; infinite roots last.
/// Among equal moduli, real positive roots are placed last.
struct RootSet {
  std::vector<Root> roots;

  std::size_t size() const { return roots.size(); }
  std::size_t infinite_count() const;
  const Root& operator[](std::size_t i) const { return roots[i]; }
};

/// Orders arbitrary roots into a RootSet.
RootSet sorted_root_set(std::vector<Root> roots);
/// Roots of z^{2n} det B(1/z): reciprocals, with 0 and infinity exchanged.
RootSet reciprocal(const RootSet& set);

CMatrix eval_B(const QuadMatPoly& poly, Complex z);
/// z^{-1} B_{-1} + B_0 + z B_1, or with z -> 1/z when `reversed` is set.
CMatrix eval_phi(const QuadMatPoly& poly, Complex z, bool reversed = false);
Complex det_B(const QuadMatPoly& poly, Complex z);

/// Roots via the 2n x 2n pencil ([0 I; -B_{-1} -B_0], [I 0; 0 B_1]).
RootSet roots(const QuadMatPoly& poly);

/// Distance between two root multisets in the chordal metric of the
/// Riemann sphere (so infinite and very large roots compare sensibly):
/// greedy nearest matching, returns the largest matched distance, or
/// +inf when the sizes differ.
double root_set_distance(const std::vector<Root>& a, const std::vector<Root>& b);
double chordal_distance(const Root& a, const Root& b);

/// Coefficients H_i of phi(z)^{-1} = sum_i z^i H_i on the annulus:
/// H_0 = sum_j G^j K^{-1} R^j, H_{-i} = G^i H_0, H_i = H_0 R^i.
struct LaurentSeries {
  int first_index = 0;
  std::vector<Matrix> coefficients;

  const Matrix& at(int i) const { return coefficients.at(static_cast<std::size_t>(i - first_index)); }
  int last_index() const { return first_index + static_cast<int>(coefficients.size()) - 1; }
};

LaurentSeries h_coefficients(const Matrix& g, const Matrix& k, const Matrix& r, int first_index,
                             int last_index);

enum class Direction { PlainZ, ReversedZ };
enum class Strength { Canonical, WeakCanonical };

/// phi(z) = (I - z left) middle (I - z^{-1} right), or the same for phi(1/z).
struct Factorization {
  Direction direction = Direction::PlainZ;
  Matrix left_factor;
  Matrix middle;
  Matrix right_factor;
  Strength strength = Strength::WeakCanonical;

  /// Classifies strength from the spectral radii of the outer factors.
  /// Throws SingularMatrixError if `middle` is singular and VerificationError
  /// if either outer factor has spectral radius above 1 + tolerance.
  static Factorization make(Direction direction, Matrix left_factor, Matrix middle,
                            Matrix right_factor, double tolerance = 1e-10);
};

inline constexpr int kDefaultSamples = 16;

/// Unit-circle sample points exp(2 pi i k / samples), k = 0..samples-1.
std::vector<Complex> unit_circle_samples(int samples);

/// max_k || phi(z_k) - (I - z_k L) M (I - z_k^{-1} R) ||_inf over the
/// unit-circle samples (phi evaluated at 1/z_k for ReversedZ).
double factorization_residual(const QuadMatPoly& poly, const Factorization& f,
                              int samples = kDefaultSamples);

}  // namespace qbd
