#include "qbdshift/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qbdshift/errors.hpp"

namespace qbd {

namespace {

// Bracketing refinement of a positive root of f(z) = rho(A(z)) - z, seeded
// by the pencil estimate.  Returns the estimate unchanged when no sign
// change is found within a relative window of 1e-4.
double refine_xi(const QbdTriple& model, double estimate) {
  if (!std::isfinite(estimate) || estimate <= 0.0) return estimate;
  auto f = [&](double z) { return spectral_radius(model.eval_A(z)) - z; };
  for (double window = 1e-8; window <= 1e-4; window *= 10.0) {
    double lo = estimate * (1.0 - window);
    double hi = estimate * (1.0 + window);
    // Never straddle the unit root.
    if (estimate > 1.0) lo = std::max(lo, 1.0 + 0.5 * (estimate - 1.0));
    if (estimate < 1.0) hi = std::min(hi, 1.0 - 0.5 * (1.0 - estimate));
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if ((f_lo > 0.0) == (f_hi > 0.0)) continue;
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = f(mid);
      if ((f_mid > 0.0) == (f_lo > 0.0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
  return estimate;
}

std::string describe_entry(const char* block, Eigen::Index i, Eigen::Index j, double value) {
  std::ostringstream os;
  os.precision(17);
  os << block << "(" << i << "," << j << ") = " << value;
  return os.str();
}

}  // namespace

QbdTriple QbdTriple::reversed() const {
  QbdTriple out(a_plus_, a_zero_, a_minus_);
  out.warnings_ = warnings_;
  return out;
}

QbdTriple validate(const Matrix& a_minus, const Matrix& a_zero, const Matrix& a_plus) {
  const Eigen::Index n = a_zero.rows();
  if (n < 1 || a_zero.cols() != n || a_minus.rows() != n || a_minus.cols() != n ||
      a_plus.rows() != n || a_plus.cols() != n) {
    throw ValidationError("validate: the three blocks must be n x n with n >= 1");
  }
  const std::pair<const char*, const Matrix*> blocks[3] = {
      {"A_-1", &a_minus}, {"A_0", &a_zero}, {"A_1", &a_plus}};
  for (const auto& [name, m] : blocks) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double x = (*m)(i, j);
        if (!std::isfinite(x)) throw ValidationError("validate: non-finite entry " + describe_entry(name, i, j, x));
        if (x < 0.0) throw ValidationError("validate: negative entry " + describe_entry(name, i, j, x));
      }
    }
  }
  const Matrix total = a_minus + a_zero + a_plus;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = total.row(i).sum();
    if (std::abs(s - 1.0) > kRowSumTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << "validate: row " << i << " of A_-1 + A_0 + A_1 sums to " << s << ", expected 1";
      throw ValidationError(os.str());
    }
  }
  if (!is_irreducible(total)) throw ValidationError("validate: A_-1 + A_0 + A_1 is reducible");

  QbdTriple model(a_minus, a_zero, a_plus);
  // The chain should have 1 as its only unit-modulus root.
  try {
    const RootSet rs = roots(model.poly());
    int extra = 0;
    for (const Root& r : rs.roots) {
      if (!r.infinite && std::abs(r.modulus() - 1.0) <= 1e-8 && std::abs(r.value - 1.0) > 1e-4) ++extra;
    }
    if (extra > 0) {
      model.warnings_.push_back("B(z) has " + std::to_string(extra) +
                                " unit-modulus root(s) besides z = 1; the single-final-class "
                                "assumption may be violated");
    }
  } catch (const Error& e) {
    model.warnings_.push_back(std::string("root check skipped: ") + e.what());
  }
  return model;
}

std::string_view to_string(Recurrence kind) {
  switch (kind) {
    case Recurrence::PositiveRecurrent: return "PositiveRecurrent";
    case Recurrence::NullRecurrent: return "NullRecurrent";
    case Recurrence::Transient: return "Transient";
  }
  return "?";
}

Recurrence parse_recurrence(std::string_view text) {
  if (text == "PositiveRecurrent" || text == "positive" || text == "pos") return Recurrence::PositiveRecurrent;
  if (text == "NullRecurrent" || text == "null") return Recurrence::NullRecurrent;
  if (text == "Transient" || text == "transient") return Recurrence::Transient;
  throw ParseError("unknown recurrence class '" + std::string(text) + "'");
}

Classification Classification::reversed() const {
  Classification out;
  switch (kind) {
    case Recurrence::PositiveRecurrent: out.kind = Recurrence::Transient; break;
    case Recurrence::Transient: out.kind = Recurrence::PositiveRecurrent; break;
    case Recurrence::NullRecurrent: out.kind = Recurrence::NullRecurrent; break;
  }
  out.drift = -drift;
  out.xi_n = 1.0 / xi_n1;
  out.xi_n1 = 1.0 / xi_n;
  out.roots = reciprocal(roots);
  return out;
}

Vector stationary_vector(const QbdTriple& model) {
  return perron_pair(model.sum(), PerronScaling::UnitSum).left;
}

double drift(const QbdTriple& model) {
  const Vector theta = stationary_vector(model);
  const Vector e = Vector::Ones(model.n());
  return theta.dot(model.a_plus() * e) - theta.dot(model.a_minus() * e);
}

Classification classify(const QbdTriple& model) {
  Classification cls;
  cls.drift = drift(model);
  if (std::abs(cls.drift) <= kNullDriftTolerance) {
    cls.kind = Recurrence::NullRecurrent;
  } else {
    cls.kind = cls.drift < 0.0 ? Recurrence::PositiveRecurrent : Recurrence::Transient;
  }
  cls.roots = roots(model.poly());

  const std::size_t n = static_cast<std::size_t>(model.n());
  if (cls.kind == Recurrence::NullRecurrent) {
    cls.xi_n = 1.0;
    cls.xi_n1 = 1.0;
    return cls;
  }
  // Drop the root nearest to z = 1; the (n-1)-th remaining root (0-based) is
  // xi_{n+1} when positive recurrent and xi_n when transient.
  std::vector<Root> rest = cls.roots.roots;
  auto unit = std::min_element(rest.begin(), rest.end(), [](const Root& a, const Root& b) {
    const double da = a.infinite ? std::numeric_limits<double>::infinity() : std::abs(a.value - 1.0);
    const double db = b.infinite ? std::numeric_limits<double>::infinity() : std::abs(b.value - 1.0);
    return da < db;
  });
  rest.erase(unit);
  const Root& other = rest[n - 1];
  const double estimate = other.modulus();
  if (cls.kind == Recurrence::PositiveRecurrent) {
    cls.xi_n = 1.0;
    cls.xi_n1 = refine_xi(model, estimate);
  } else {
    cls.xi_n = refine_xi(model, estimate);
    cls.xi_n1 = 1.0;
  }
  return cls;
}

PerronData PerronData::reversed() const {
  PerronData out;
  out.u_G = u_Ghat;
  out.v_G = v_Ghat;
  out.u_Ghat = u_G;
  out.v_Ghat = v_G;
  out.u_R = u_Rhat;
  out.v_R = v_Rhat;
  out.u_Rhat = u_R;
  out.v_Rhat = v_R;
  return out;
}

PerronData PerronData::with_solutions(const Matrix& g, const Matrix& r, const Matrix& g_hat,
                                      const Matrix& r_hat) const {
  PerronData out = *this;
  out.v_G = nonnegative_eigenvector(g.transpose(), spectral_radius(g));
  out.u_R = nonnegative_eigenvector(r, spectral_radius(r));
  out.v_Ghat = nonnegative_eigenvector(g_hat.transpose(), spectral_radius(g_hat));
  out.u_Rhat = nonnegative_eigenvector(r_hat, spectral_radius(r_hat));
  return out;
}

PerronData perron_data(const QbdTriple& model, const Classification& cls) {
  if (!(cls.xi_n > 0.0) || !std::isfinite(cls.xi_n1)) {
    throw ValidationError("perron_data: degenerate triple (A_-1 = 0 or A_1 = 0 gives a root at 0 or infinity)");
  }
  const Eigen::Index n = model.n();
  const Vector e = Vector::Ones(n);
  PerronData p;
  const PerronPair at_xi_n = perron_pair(model.eval_A(cls.xi_n), PerronScaling::UnitMax);
  p.u_G = at_xi_n.right;
  p.v_Rhat = at_xi_n.left;
  if (cls.kind == Recurrence::NullRecurrent) {
    p.u_G = e;
    p.u_Ghat = e;
    p.v_R = p.v_Rhat;
    return p;
  }
  const PerronPair at_xi_n1 = perron_pair(model.eval_A(cls.xi_n1), PerronScaling::UnitMax);
  p.u_Ghat = at_xi_n1.right;
  p.v_R = at_xi_n1.left;
  if (cls.kind == Recurrence::PositiveRecurrent) p.u_G = e;
  if (cls.kind == Recurrence::Transient) p.u_Ghat = e;
  return p;
}

}  // namespace qbd
