#include "qbdshift/generator.hpp"

#include <cmath>
#include <random>

#include "qbdshift/errors.hpp"

namespace qbd {

namespace {

struct Blocks {
  Matrix a_minus, a_zero, a_plus;
};

Blocks normalize(const Matrix& down, const Matrix& local, const Matrix& up) {
  Blocks b{down, local, up};
  for (Eigen::Index i = 0; i < down.rows(); ++i) {
    const double s = down.row(i).sum() + local.row(i).sum() + up.row(i).sum();
    b.a_minus.row(i) /= s;
    b.a_zero.row(i) /= s;
    b.a_plus.row(i) /= s;
  }
  return b;
}

double drift_of(const Blocks& b) {
  const Matrix total = b.a_minus + b.a_zero + b.a_plus;
  const Vector theta = perron_pair(total, PerronScaling::UnitSum).left;
  const Vector e = Vector::Ones(total.rows());
  return theta.dot(b.a_plus * e) - theta.dot(b.a_minus * e);
}

}  // namespace

GeneratedModel generate(const GenOptions& options) {
  const Eigen::Index n = options.n;
  if (n < 1) throw ValidationError("generate: n must be at least 1");
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_block = [&] {
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = unit(rng);
    }
    return m;
  };
  const Matrix down = random_block();
  const Matrix up = random_block();
  Matrix local = random_block();
  for (Eigen::Index i = 0; i < n; ++i) local(i, (i + 1) % n) += 1e-3;

  GeneratedModel out;
  out.kind = options.kind;
  out.seed = options.seed;
  if (options.kind == Recurrence::NullRecurrent) {
    const Blocks b = normalize(down, local, down);
    out.a_minus = b.a_minus;
    out.a_zero = b.a_zero;
    out.a_plus = b.a_plus;
    return out;
  }

  double magnitude = options.drift ? std::abs(*options.drift) : 0.02 + 0.18 * unit(rng);
  if (!(magnitude > 0.0)) throw ValidationError("generate: drift target must be nonzero");
  const double target = options.kind == Recurrence::PositiveRecurrent ? -magnitude : magnitude;
  out.target_drift = target;

  // drift decreases as the downward mass grows; bisect on log(scale).
  auto f = [&](double log_c) { return drift_of(normalize(std::exp(log_c) * down, local, up)) - target; };
  double lo = std::log(1e-4);
  double hi = std::log(1e4);
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    throw ValidationError("generate: drift target " + std::to_string(target) + " is not reachable for this draw");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid > 0.0) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  const Blocks b = normalize(std::exp(0.5 * (lo + hi)) * down, local, up);
  out.a_minus = b.a_minus;
  out.a_zero = b.a_zero;
  out.a_plus = b.a_plus;
  return out;
}

}  // namespace qbd
