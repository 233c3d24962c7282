#pragma once

// Dense real-matrix primitives shared by every other module.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qbd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

namespace tol {
inline constexpr double kLinear = 1e-12;
inline constexpr double kEigen = 1e-10;
inline constexpr double kPivot = 1e-14;
inline constexpr double kSteinGap = 1e-12;
}  // namespace tol

/// Maximum absolute row sum.
double inf_norm(const Matrix& m);
double inf_norm(const CMatrix& m);
/// Maximum absolute entry.
double max_abs(const Vector& v);

bool is_nonnegative(const Matrix& m, double slack = 0.0);
bool all_finite(const Matrix& m);
Matrix identity(Eigen::Index n);

/// Solves M X = B by partial-pivot LU.  Throws SingularMatrixError when a
/// pivot falls below kPivot * ||M||.
Matrix solve_linear(const Matrix& m, const Matrix& b);
Vector solve_vector(const Matrix& m, const Vector& b);
/// Solves X M = B.
Matrix solve_linear_right(const Matrix& b, const Matrix& m);
Matrix inverse(const Matrix& m);

std::vector<Complex> eigenvalues(const Matrix& m);

/// Spectral radius.  Nonnegative irreducible inputs go through a power
/// iteration whose Collatz-Wielandt bounds enclose the result; everything
/// else (and stalled iterations) falls back to a dense eigen solve.
double spectral_radius(const Matrix& m);

enum class PerronScaling {
  UnitSum,      // both vectors sum to one
  UnitMax,      // both vectors have unit infinity norm
  UnitPairing,  // right sums to one, left^T right = 1
};

struct PerronPair {
  double radius = 0.0;
  Vector right;
  Vector left;
  // Factors applied to the unit-max vectors to reach the requested scaling.
  double right_scale = 1.0;
  double left_scale = 1.0;
};

/// Perron root and positive eigenvectors of a nonnegative irreducible matrix.
PerronPair perron_pair(const Matrix& m,
                       PerronScaling scaling = PerronScaling::UnitSum);

/// Nonnegative right eigenvector for `radius` = rho(m) of a nonnegative,
/// possibly reducible, matrix; unit infinity norm.  Computed by inverse
/// iteration just above the Perron root, where (sigma I - m)^{-1} >= 0.
Vector nonnegative_eigenvector(const Matrix& m, double radius);

/// Rescales x so that y^T x = target.  Throws ShiftError if y^T x vanishes.
Vector scale_to_pairing(const Vector& x, const Vector& y, double target,
                        double* factor = nullptr);

struct Component {
  std::vector<int> members;  // sorted
  bool nontrivial = false;   // size > 1, or a singleton with a self-loop
};

/// Strongly connected components of the graph with edge i -> j iff
/// m(i, j) > threshold, listed in topological order (sources first).
std::vector<Component> scc_partition(const Matrix& m, double threshold = 0.0);
bool is_irreducible(const Matrix& m, double threshold = 0.0);

Matrix kron(const Matrix& a, const Matrix& b);

/// Unique solution of W - G W R = C; requires rho(G) rho(R) < 1.
/// Kronecker-structured direct solve for n <= 16, complex Schur forms above.
Matrix stein_solve(const Matrix& g, const Matrix& r, const Matrix& c);

inline constexpr Eigen::Index kSteinDirectLimit = 16;

}  // namespace qbd
