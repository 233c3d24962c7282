#pragma once

// Hand-rolled instance generators for the property tests.  Independent of
// the library generator: blocks come from splitting a random stochastic
// matrix entry by entry, and the class is forced by swapping A_{-1}, A_1.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "qbdshift/model.hpp"

namespace fixture {

using Matrix = Eigen::MatrixXd;

struct Triple {
  Matrix am, a0, ap;
};

inline Triple scalar(double am, double a0, double ap) {
  Triple t{Matrix(1, 1), Matrix(1, 1), Matrix(1, 1)};
  t.am(0, 0) = am;
  t.a0(0, 0) = a0;
  t.ap(0, 0) = ap;
  return t;
}

inline Triple P1() { return scalar(0.5, 0.2, 0.3); }
inline Triple N1() { return scalar(0.4, 0.2, 0.4); }
inline Triple T1() { return scalar(0.3, 0.2, 0.5); }

inline Triple N2() {
  Triple t;
  t.am = Matrix(2, 2);
  t.am << 0.2, 0.1, 0.1, 0.2;
  t.ap = t.am;
  t.a0 = Matrix::Constant(2, 2, 0.2);
  return t;
}

/// theta^T A_1 e - theta^T A_{-1} e, theta from a dense null-space solve.
inline double drift(const Triple& t) {
  const auto n = t.a0.rows();
  Matrix m = (t.am + t.a0 + t.ap).transpose() - Matrix::Identity(n, n);
  m.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  const Eigen::VectorXd theta = m.fullPivLu().solve(rhs);
  const Eigen::VectorXd e = Eigen::VectorXd::Ones(n);
  return theta.dot(t.ap * e) - theta.dot(t.am * e);
}

/// Random instance of the requested class.  A dense random stochastic total
/// is split entrywise with random weights; null instances take A_1 = A_{-1}.
inline Triple random_triple(qbd::Recurrence kind, Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + 17);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (;;) {
    Triple t{Matrix(n, n), Matrix(n, n), Matrix(n, n)};
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double w0 = u(rng);
        const double w1 = u(rng);
        const double w2 = kind == qbd::Recurrence::NullRecurrent ? w0 : u(rng);
        const double mass = u(rng);
        t.am(i, j) = mass * w0;
        t.a0(i, j) = mass * w1;
        t.ap(i, j) = mass * w2;
      }
      const double row = t.am.row(i).sum() + t.a0.row(i).sum() + t.ap.row(i).sum();
      t.am.row(i) /= row;
      t.a0.row(i) /= row;
      t.ap.row(i) = kind == qbd::Recurrence::NullRecurrent ? Eigen::RowVectorXd(t.am.row(i))
                                                           : Eigen::RowVectorXd(t.ap.row(i) / row);
    }
    if (kind == qbd::Recurrence::NullRecurrent) {
      // Fold the row-sum rounding into A_0 so the total is stochastic to an ulp.
      for (Eigen::Index i = 0; i < n; ++i) {
        t.a0(i, i) += 1.0 - (t.am.row(i).sum() + t.a0.row(i).sum() + t.ap.row(i).sum());
      }
      return t;
    }
    const double d = drift(t);
    if (std::abs(d) < 1e-3) continue;
    const bool want_negative = kind == qbd::Recurrence::PositiveRecurrent;
    if ((d < 0.0) != want_negative) std::swap(t.am, t.ap);
    return t;
  }
}

inline qbd::QbdTriple validated(const Triple& t) { return qbd::validate(t.am, t.a0, t.ap); }

inline const char* class_name(qbd::Recurrence k) {
  switch (k) {
    case qbd::Recurrence::PositiveRecurrent: return "positive";
    case qbd::Recurrence::NullRecurrent: return "null";
    case qbd::Recurrence::Transient: return "transient";
  }
  return "?";
}

}  // namespace fixture
