#include "qbdshift/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "qbdshift/errors.hpp"

namespace qbd {

namespace {

void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw DimensionError(std::string(who) + ": expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

double dense_spectral_radius(const Matrix& m) {
  double rho = 0.0;
  for (const Complex& l : eigenvalues(m)) rho = std::max(rho, std::abs(l));
  return rho;
}

// Power iteration on M + I (primitive whenever M is irreducible) with the
// Collatz-Wielandt bounds of M itself.  Returns a negative value when the
// iteration stalls so the caller can fall back.
double power_spectral_radius(const Matrix& m) {
  const Eigen::Index n = m.rows();
  Vector x = Vector::Ones(n);
  double previous_width = std::numeric_limits<double>::infinity();
  int slow_steps = 0;
  for (int it = 0; it < 20000; ++it) {
    const Vector mx = m * x;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double q = mx(i) / x(i);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    const double width = hi - lo;
    if (width <= 1e-14 * hi || hi == 0.0) return 0.5 * (lo + hi);
    // Convergence ratio above 0.999 for a sustained stretch: give up.
    if (width > 0.999 * previous_width) {
      if (++slow_steps > 50) return -1.0;
    } else {
      slow_steps = 0;
    }
    previous_width = width;
    Vector y = mx + x;
    x = y / y.maxCoeff();
    if (x.minCoeff() <= 0.0) return -1.0;
  }
  return -1.0;
}

}  // namespace

double inf_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double inf_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

double max_abs(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

bool is_nonnegative(const Matrix& m, double slack) { return (m.array() >= -slack).all(); }

bool all_finite(const Matrix& m) { return m.allFinite(); }

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

Matrix solve_linear(const Matrix& m, const Matrix& b) {
  require_square(m, "solve_linear");
  if (b.rows() != m.rows()) throw DimensionError("solve_linear: right-hand side is not conformal");
  Eigen::PartialPivLU<Matrix> lu(m);
  const double scale = std::max(inf_norm(m), std::numeric_limits<double>::min());
  const Matrix& packed = lu.matrixLU();
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    if (std::abs(packed(i, i)) <= tol::kPivot * scale) {
      throw SingularMatrixError("solve_linear: pivot " + std::to_string(i) +
                                " below threshold (matrix numerically singular)");
    }
  }
  Matrix x = lu.solve(b);
  // One step of iterative refinement.
  const Matrix residual = b - m * x;
  x += lu.solve(residual);
  return x;
}

Vector solve_vector(const Matrix& m, const Vector& b) { return solve_linear(m, b).col(0); }

Matrix solve_linear_right(const Matrix& b, const Matrix& m) {
  return solve_linear(m.transpose(), b.transpose()).transpose();
}

Matrix inverse(const Matrix& m) { return solve_linear(m, identity(m.rows())); }

std::vector<Complex> eigenvalues(const Matrix& m) {
  require_square(m, "eigenvalues");
  Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw ConvergenceError("eigenvalues: QR iteration failed", 0, 0.0);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double spectral_radius(const Matrix& m) {
  require_square(m, "spectral_radius");
  if (!all_finite(m)) throw DimensionError("spectral_radius: non-finite entry");
  if (m.rows() == 1) return std::abs(m(0, 0));
  if (is_nonnegative(m) && is_irreducible(m)) {
    const double rho = power_spectral_radius(m);
    if (rho >= 0.0) return rho;
  }
  return dense_spectral_radius(m);
}

Vector nonnegative_eigenvector(const Matrix& m, double radius) {
  require_square(m, "nonnegative_eigenvector");
  const Eigen::Index n = m.rows();
  if (n == 1) return Vector::Ones(1);
  const double sigma = radius + std::max(1e-10 * radius, 1e-13 * std::max(inf_norm(m), 1.0));
  Eigen::PartialPivLU<Matrix> lu(sigma * identity(n) - m);
  Vector x = Vector::Ones(n);
  for (int it = 0; it < 60; ++it) {
    Vector y = lu.solve(x);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = std::max(y(i), 0.0);
    const double peak = y.maxCoeff();
    if (!(peak > 0.0) || !std::isfinite(peak)) {
      throw ConvergenceError("nonnegative_eigenvector: inverse iteration broke down", it, 0.0);
    }
    y /= peak;
    const double change = max_abs(y - x);
    x = std::move(y);
    if (change <= 1e-15 && it >= 2) break;
  }
  return x;
}

PerronPair perron_pair(const Matrix& m, PerronScaling scaling) {
  require_square(m, "perron_pair");
  if (!is_nonnegative(m)) throw DimensionError("perron_pair: matrix has negative entries");
  if (m.rows() > 1 && !is_irreducible(m)) {
    throw ReducibleMatrixError("perron_pair: matrix is reducible");
  }
  PerronPair p;
  p.radius = spectral_radius(m);
  p.right = nonnegative_eigenvector(m, p.radius);
  p.left = nonnegative_eigenvector(m.transpose(), p.radius);
  switch (scaling) {
    case PerronScaling::UnitMax:
      break;
    case PerronScaling::UnitSum:
      p.right_scale = 1.0 / p.right.sum();
      p.left_scale = 1.0 / p.left.sum();
      break;
    case PerronScaling::UnitPairing:
      p.right_scale = 1.0 / p.right.sum();
      p.left_scale = 1.0 / (p.left.dot(p.right) * p.right_scale);
      break;
  }
  p.right *= p.right_scale;
  p.left *= p.left_scale;
  const double scale = std::max(p.radius, 1.0);
  const double res_r = max_abs(m * p.right - p.radius * p.right) / max_abs(p.right);
  const double res_l = max_abs(m.transpose() * p.left - p.radius * p.left) / max_abs(p.left);
  if (res_r > tol::kEigen * scale || res_l > tol::kEigen * scale) {
    throw ConvergenceError("perron_pair: eigen-residual above tolerance", 0, std::max(res_r, res_l));
  }
  return p;
}

Vector scale_to_pairing(const Vector& x, const Vector& y, double target, double* factor) {
  const double pairing = y.dot(x);
  if (!(std::abs(pairing) > 1e-300) || !std::isfinite(pairing) ||
      std::abs(pairing) <= 1e-14 * max_abs(x) * max_abs(y)) {
    throw ShiftError("scale_to_pairing: pairing vanishes");
  }
  const double f = target / pairing;
  if (factor) *factor = f;
  return f * x;
}

std::vector<Component> scc_partition(const Matrix& m, double threshold) {
  require_square(m, "scc_partition");
  const int n = static_cast<int>(m.rows());
  // Tarjan; recursion depth is bounded by n, which is small here.
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<char> on_stack(n, 0);
  std::vector<Component> reverse_topo;
  int counter = 0;

  auto visit = [&](auto&& self, int v) -> void {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (int w = 0; w < n; ++w) {
      if (!(m(v, w) > threshold)) continue;
      if (index[w] < 0) {
        self(self, w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      Component c;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        c.members.push_back(w);
      } while (w != v);
      std::sort(c.members.begin(), c.members.end());
      c.nontrivial = c.members.size() > 1 || m(v, v) > threshold;
      reverse_topo.push_back(std::move(c));
    }
  };
  for (int v = 0; v < n; ++v) {
    if (index[v] < 0) visit(visit, v);
  }
  return {reverse_topo.rbegin(), reverse_topo.rend()};
}

bool is_irreducible(const Matrix& m, double threshold) {
  if (m.rows() == 1) return true;
  return scc_partition(m, threshold).size() == 1;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix stein_solve(const Matrix& g, const Matrix& r, const Matrix& c) {
  require_square(g, "stein_solve");
  require_square(r, "stein_solve");
  if (c.rows() != g.rows() || c.cols() != r.rows()) {
    throw DimensionError("stein_solve: C is not conformal with G and R");
  }
  const double gap = spectral_radius(g) * spectral_radius(r);
  if (gap >= 1.0 - tol::kSteinGap) {
    throw NullRecurrenceError("stein_solve: rho(G) rho(R) = " + std::to_string(gap) +
                              " >= 1; the series sum G^i C R^i diverges");
  }
  const Eigen::Index n = g.rows();
  const Eigen::Index m = r.rows();
  Matrix w;
  if (n <= kSteinDirectLimit && m <= kSteinDirectLimit) {
    // vec(G W R) = (R^T kron G) vec(W) with column-major vec.
    const Matrix system = identity(n * m) - kron(r.transpose(), g);
    const Matrix rhs = Eigen::Map<const Vector>(c.data(), c.size());
    const Vector sol = solve_linear(system, rhs);
    w = Eigen::Map<const Matrix>(sol.data(), n, m);
  } else {
    // Complex Schur forms G = U T U*, R = V S V*; then Y - T Y S = U* C V is
    // solved one column at a time with triangular solves.
    const Eigen::ComplexSchur<Matrix> sg(g);
    const Eigen::ComplexSchur<Matrix> sr(r);
    const CMatrix& t = sg.matrixT();
    const CMatrix& sm = sr.matrixT();
    const CMatrix f = sg.matrixU().adjoint() * c.cast<Complex>() * sr.matrixU();
    CMatrix y(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      Eigen::VectorXcd rhs = f.col(j);
      if (j > 0) rhs += t * (y.leftCols(j) * sm.col(j).head(j));
      const CMatrix lhs = CMatrix::Identity(n, n) - sm(j, j) * t;
      y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
    }
    w = (sg.matrixU() * y * sr.matrixU().adjoint()).real();
  }
  return w;
}

}  // namespace qbd
