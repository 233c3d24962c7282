#include "qbdshift/shift.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "qbdshift/errors.hpp"

namespace qbd {

namespace {

constexpr double kClampSlack = 1e-12;

Matrix clamped(const Matrix& m, const char* what) {
  const double floor = -kClampSlack * std::max(m.cwiseAbs().maxCoeff(), 1.0);
  if (m.minCoeff() < floor) {
    throw VerificationError(std::string("recovered ") + what + " has negative entries");
  }
  return m.cwiseMax(0.0);
}

void require_vector(const Vector& x, Eigen::Index n, const char* what) {
  if (x.size() != n) throw DimensionError(std::string(what) + ": vector of the wrong length");
  if (!x.allFinite()) throw DimensionError(std::string(what) + ": non-finite vector");
}

// x and y span the same line (up to sign).
bool parallel(const Vector& x, const Vector& y) {
  const double nx = x.norm();
  const double ny = y.norm();
  if (nx == 0.0 || ny == 0.0) return false;
  const double c = std::abs(x.dot(y)) / (nx * ny);
  return 1.0 - c <= 1e-12;
}

Route mirror(Route r) {
  switch (r) {
    case Route::Right: return Route::Left;
    case Route::Left: return Route::Right;
    default: return r;
  }
}

ShiftKind kind_of(Route r) {
  switch (r) {
    case Route::Right: return ShiftKind::Right;
    case Route::Left: return ShiftKind::Left;
    case Route::Double: return ShiftKind::Double;
    default: throw ShiftError("route has no shift kind");
  }
}

Route route_of(ShiftKind k) {
  switch (k) {
    case ShiftKind::Right: return Route::Right;
    case ShiftKind::Left: return Route::Left;
    case ShiftKind::Double: return Route::Double;
  }
  return Route::Direct;
}

struct SideSolution {
  Matrix G, R, K;
  SideReport report;
};

SideSolution solve_side(const QbdTriple& model, const Classification& cls, const PerronData& perron,
                        Route route, const SolveOptions& options) {
  SideSolution out;
  out.report.route = route;
  const QuadMatPoly poly = model.poly();
  if (route == Route::Direct) {
    CrOptions cr = options.cr;
    if (cls.kind == Recurrence::NullRecurrent) cr.tol = std::max(cr.tol, options.null_tol);
    CrResult res = solve_min_G(poly, cr);
    out.G = clamped(res.G, "G");
    RK rk = derive_R_K(poly, out.G, true);
    out.R = std::move(rk.R);
    out.K = std::move(rk.K);
    out.report.iterations = res.iterations;
    out.report.converged = res.converged;
    out.report.rate = res.rate;
    return out;
  }
  const FreeVectors fv = a_priori_vectors(perron);
  ShiftTransform t = build_shift(kind_of(route), model, cls, perron, fv.v, fv.w);
  const QuadMatPoly shifted = t.poly();
  CrResult res = solve_min_G(shifted, options.cr);
  RK rk = derive_R_K(shifted, res.G, false);
  RecoveredGR rec = recover_GR(res.G, rk.R, t, poly, options.recover_tol);
  out.G = clamped(rec.G, "G");
  out.R = clamped(rec.R, "R");
  out.K = std::move(rk.K);
  out.report.iterations = res.iterations;
  out.report.converged = res.converged;
  out.report.rate = res.rate;
  out.report.transform = std::move(t);
  return out;
}

}  // namespace

std::string_view to_string(ShiftKind kind) {
  switch (kind) {
    case ShiftKind::Right: return "right";
    case ShiftKind::Left: return "left";
    case ShiftKind::Double: return "double";
  }
  return "?";
}

std::string_view to_string(Route route) {
  switch (route) {
    case Route::Direct: return "direct";
    case Route::Right: return "right";
    case Route::Left: return "left";
    case Route::Double: return "double";
    case Route::Auto: return "auto";
  }
  return "?";
}

Route parse_route(std::string_view text) {
  if (text == "direct") return Route::Direct;
  if (text == "right" || text == "right-shift") return Route::Right;
  if (text == "left" || text == "left-shift") return Route::Left;
  if (text == "double" || text == "double-shift") return Route::Double;
  if (text == "auto") return Route::Auto;
  throw ParseError("unknown route '" + std::string(text) + "' (expected direct, right, left, double or auto)");
}

ShiftKind auto_kind(Recurrence kind) {
  switch (kind) {
    case Recurrence::NullRecurrent: return ShiftKind::Double;
    case Recurrence::PositiveRecurrent: return ShiftKind::Right;
    case Recurrence::Transient: return ShiftKind::Left;
  }
  return ShiftKind::Double;
}

ShiftTransform build_right(const QbdTriple& model, const Classification& cls, const PerronData& perron,
                           const Vector& v) {
  const Eigen::Index n = model.n();
  require_vector(v, n, "build_right");
  ShiftTransform t;
  t.kind = ShiftKind::Right;
  t.xi_n = cls.xi_n;
  t.xi_n1 = cls.xi_n1;
  t.u_G = perron.u_G;
  t.v = scale_to_pairing(v, t.u_G, 1.0);
  const Matrix q = t.u_G * t.v.transpose();
  t.a_minus = model.a_minus() * (identity(n) - q);
  t.a_zero = model.a_zero() + t.xi_n * model.a_plus() * q;
  t.a_plus = model.a_plus();
  t.Q = q;
  return t;
}

ShiftTransform build_left(const QbdTriple& model, const Classification& cls, const PerronData& perron,
                          const Vector& w) {
  const Eigen::Index n = model.n();
  require_vector(w, n, "build_left");
  ShiftTransform t;
  t.kind = ShiftKind::Left;
  t.xi_n = cls.xi_n;
  t.xi_n1 = cls.xi_n1;
  t.w = w;
  t.v_R = scale_to_pairing(perron.v_R, w, 1.0);
  const Matrix s = t.w * t.v_R.transpose();
  t.a_minus = model.a_minus();
  t.a_zero = model.a_zero() + (1.0 / t.xi_n1) * s * model.a_minus();
  t.a_plus = (identity(n) - s) * model.a_plus();
  t.S = s;
  return t;
}

ShiftTransform build_double(const QbdTriple& model, const Classification& cls, const PerronData& perron,
                            const Vector& v, const Vector& w) {
  const Eigen::Index n = model.n();
  require_vector(v, n, "build_double");
  require_vector(w, n, "build_double");
  ShiftTransform t;
  t.kind = ShiftKind::Double;
  t.xi_n = cls.xi_n;
  t.xi_n1 = cls.xi_n1;
  t.u_G = perron.u_G;
  t.v = scale_to_pairing(v, t.u_G, 1.0);
  t.w = w;
  t.v_R = scale_to_pairing(perron.v_R, w, 1.0);
  const Matrix q = t.u_G * t.v.transpose();
  const Matrix s = t.w * t.v_R.transpose();
  const Matrix& am = model.a_minus();
  const Matrix& ap = model.a_plus();
  const Matrix common = model.a_zero() + t.xi_n * ap * q + (1.0 / t.xi_n1) * s * am;
  const Matrix first = common - (1.0 / t.xi_n1) * s * am * q;
  const Matrix second = common - t.xi_n * s * ap * q;
  t.a_zero_gap = inf_norm(Matrix(first - second));
  if (t.a_zero_gap > kDoubleFormTolerance * std::max(inf_norm(model.a_zero()), 1.0)) {
    std::ostringstream os;
    os << "build_double: the two forms of A_0^d differ by " << t.a_zero_gap
       << " (inconsistent xi or Perron vectors)";
    throw ShiftError(os.str());
  }
  t.a_minus = am * (identity(n) - q);
  t.a_zero = first;
  t.a_plus = (identity(n) - s) * ap;
  t.Q = q;
  t.S = s;
  return t;
}

ShiftTransform build_shift(ShiftKind kind, const QbdTriple& model, const Classification& cls,
                           const PerronData& perron, const Vector& v, const Vector& w) {
  switch (kind) {
    case ShiftKind::Right: return build_right(model, cls, perron, v);
    case ShiftKind::Left: return build_left(model, cls, perron, w);
    case ShiftKind::Double: return build_double(model, cls, perron, v, w);
  }
  throw ShiftError("build_shift: unknown kind");
}

FreeVectors a_priori_vectors(const PerronData& perron) {
  const Eigen::Index n = perron.u_G.size();
  const Vector e = Vector::Ones(n);
  return {scale_to_pairing(e, perron.u_G, 1.0), scale_to_pairing(e, perron.v_R, 1.0)};
}

FreeVectors default_vectors(const PerronData& perron, const Classification& cls, const Matrix& k_hat) {
  if (!perron.has_solution_vectors()) {
    throw ShiftError("default_vectors: Perron data lacks the solution vectors");
  }
  FreeVectors fv;
  fv.v = scale_to_pairing(perron.v_Ghat, perron.u_G, 1.0);
  fv.w = perron.u_Rhat;
  if (cls.kind == Recurrence::NullRecurrent) {
    const double pairing = fv.v.dot(solve_vector(k_hat, fv.w));
    if (!(pairing < 0.0)) throw ShiftError("default_vectors: v_Ghat^T K-hat^{-1} u_Rhat is not negative");
    fv.w *= -1.0 / pairing;
  }
  return fv;
}

ShiftedGR shifted_GR(const Matrix& g, const Matrix& r, const Matrix& k, const ShiftTransform& t) {
  ShiftedGR out{g, r, k};
  if (t.has_Q()) out.G = g - t.xi_n * *t.Q;
  if (t.has_S()) out.R = r - (1.0 / t.xi_n1) * *t.S;
  return out;
}

RecoveredGR recover_GR(const Matrix& g_s, const Matrix& r_s, const ShiftTransform& t,
                       const QuadMatPoly& original, double tolerance) {
  RecoveredGR out;
  out.G = t.has_Q() ? Matrix(g_s + t.xi_n * *t.Q) : g_s;
  out.R = t.has_S() ? Matrix(r_s + (1.0 / t.xi_n1) * *t.S) : r_s;
  out.residual_G = residual_G(original, out.G);
  out.residual_R = residual_R(original, out.R);
  if (out.residual_G > tolerance || out.residual_R > tolerance) {
    std::ostringstream os;
    os << "recover_GR: recovered solutions miss the original equations (G residual " << out.residual_G
       << ", R residual " << out.residual_R << ", tolerance " << tolerance << ")";
    throw VerificationError(os.str());
  }
  return out;
}

ShiftedHats shifted_hats_nullrec(const SolutionSet& sol, const PerronData& perron, const ShiftTransform& t,
                                 const Classification& cls) {
  if (cls.kind != Recurrence::NullRecurrent) {
    throw ShiftError("shifted_hats_nullrec: the chain is not null recurrent");
  }
  if (!perron.has_solution_vectors()) {
    throw ShiftError("shifted_hats_nullrec: Perron data lacks the solution vectors");
  }
  const Eigen::Index n = sol.K_hat.rows();
  const Matrix k_inv = inverse(sol.K_hat);
  Vector v_ghat;
  Vector u_rhat;
  switch (t.kind) {
    case ShiftKind::Right:
      if (!parallel(t.v, perron.v_Ghat)) throw ShiftError("shifted_hats_nullrec: right shift needs v = v_Ghat");
      v_ghat = t.v;
      u_rhat = perron.u_Rhat;
      break;
    case ShiftKind::Left:
      if (!parallel(t.w, perron.u_Rhat)) throw ShiftError("shifted_hats_nullrec: left shift needs w = u_Rhat");
      v_ghat = perron.v_Ghat;
      u_rhat = t.w;
      break;
    case ShiftKind::Double:
      if (!parallel(t.v, perron.v_Ghat) || !parallel(t.w, perron.u_Rhat)) {
        throw ShiftError("shifted_hats_nullrec: double shift needs v = v_Ghat and w = u_Rhat");
      }
      v_ghat = t.v;
      u_rhat = t.w;
      break;
  }
  const double pairing = v_ghat.dot(k_inv * u_rhat);
  if (!(pairing < 0.0)) {
    throw ShiftError("shifted_hats_nullrec: v_Ghat^T K-hat^{-1} u_Rhat is not negative");
  }
  if (t.kind == ShiftKind::Right) {
    u_rhat *= -1.0 / pairing;
  } else if (t.kind == ShiftKind::Left) {
    v_ghat *= -1.0 / pairing;
  } else if (std::abs(pairing + 1.0) > 1e-10) {
    throw ShiftError("shifted_hats_nullrec: double shift needs v_Ghat^T K-hat^{-1} u_Rhat = -1");
  }

  ShiftedHats out;
  const Matrix uv = u_rhat * v_ghat.transpose();
  const Vector k_inv_u = k_inv * u_rhat;
  switch (t.kind) {
    case ShiftKind::Right:
      out.R_hat = sol.R_hat + uv * k_inv;
      out.K_hat = sol.K_hat - (u_rhat + sol.K_hat * t.u_G) * v_ghat.transpose();
      out.G_hat = sol.G_hat + (t.u_G + k_inv_u) * v_ghat.transpose();
      break;
    case ShiftKind::Left:
      out.R_hat = sol.R_hat + u_rhat * (t.v_R.transpose() + v_ghat.transpose() * k_inv);
      out.K_hat = sol.K_hat - u_rhat * (v_ghat.transpose() + t.v_R.transpose() * sol.K_hat);
      out.G_hat = sol.G_hat + k_inv_u * v_ghat.transpose();
      break;
    case ShiftKind::Double:
      out.R_hat = sol.R_hat + uv * k_inv;
      out.G_hat = sol.G_hat + k_inv_u * v_ghat.transpose();
      out.K_hat = t.a_minus * out.G_hat + t.a_zero - identity(n);
      out.K_hat_compact = sol.K_hat - uv;
      break;
  }
  return out;
}

ShiftedHats shifted_hats_nonnull(const SolutionSet& sol, const ShiftTransform& t) {
  if (!sol.W) throw ShiftError("shifted_hats_nonnull: W is unavailable (null recurrent chain?)");
  const Matrix& w = *sol.W;
  const Eigen::Index n = w.rows();
  Matrix w_s;
  Matrix g_s = sol.G;
  Matrix r_s = sol.R;
  switch (t.kind) {
    case ShiftKind::Right: {
      const double a = t.xi_n * t.v.dot(sol.G_hat * t.u_G);
      if (std::abs(a - 1.0) <= kAdmissibilityMargin) {
        throw ShiftError("shifted_hats_nonnull: xi_n v^T G-hat u_G = 1, W_r is singular; use v = v_Ghat");
      }
      w_s = w - t.xi_n * *t.Q * w * sol.R;
      g_s = sol.G - t.xi_n * *t.Q;
      break;
    }
    case ShiftKind::Left: {
      const double a = t.v_R.dot(sol.R_hat * t.w) / t.xi_n1;
      if (std::abs(a - 1.0) <= kAdmissibilityMargin) {
        throw ShiftError("shifted_hats_nonnull: xi_{n+1}^{-1} v_R^T R-hat w = 1, W_l is singular; use w = u_Rhat");
      }
      w_s = w - (1.0 / t.xi_n1) * sol.G * w * *t.S;
      r_s = sol.R - (1.0 / t.xi_n1) * *t.S;
      break;
    }
    case ShiftKind::Double:
      throw ShiftError("shifted_hats_nonnull: no closed form for the double shift of a non-null chain");
  }
  ShiftedHats out;
  const HatsFromW h = hats_from_W(w_s, g_s, r_s);
  out.G_hat = h.G_hat;
  out.R_hat = h.R_hat;
  out.K_hat = t.a_zero - identity(n) + t.a_minus * out.G_hat;
  out.W = std::move(w_s);
  return out;
}

SolveResult solve(const QbdTriple& model, const Classification& cls, const PerronData& perron,
                  const SolveOptions& options) {
  const Route route = options.route == Route::Auto ? route_of(auto_kind(cls.kind)) : options.route;
  SideSolution g_side = solve_side(model, cls, perron, route, options);
  SideSolution h_side =
      solve_side(model.reversed(), cls.reversed(), perron.reversed(), mirror(route), options);

  SolveResult out;
  SolutionSet& sol = out.solution;
  sol.G = std::move(g_side.G);
  sol.R = std::move(g_side.R);
  sol.K = std::move(g_side.K);
  sol.G_hat = std::move(h_side.G);
  sol.R_hat = std::move(h_side.R);
  sol.K_hat = std::move(h_side.K);
  sol.iterations_G = g_side.report.iterations;
  sol.iterations_G_hat = h_side.report.iterations;
  if (cls.kind != Recurrence::NullRecurrent) {
    try {
      sol.W = compute_W(sol.G, sol.K, sol.R);
    } catch (const NullRecurrenceError&) {
    }
  }
  sol.update_residuals(model.poly());
  out.g_side = std::move(g_side.report);
  out.hat_side = std::move(h_side.report);
  return out;
}

std::vector<ShiftCase> build_shift_cases(const QbdTriple& model, const Classification& cls,
                                         const PerronData& perron_in, const SolutionSet& sol,
                                         const CrOptions& options) {
  const PerronData perron = perron_in.has_solution_vectors()
                                ? perron_in
                                : perron_in.with_solutions(sol.G, sol.R, sol.G_hat, sol.R_hat);
  const FreeVectors fv = default_vectors(perron, cls, sol.K_hat);
  std::vector<ShiftCase> cases;
  for (ShiftKind kind : {ShiftKind::Right, ShiftKind::Left, ShiftKind::Double}) {
    ShiftCase c;
    c.transform = build_shift(kind, model, cls, perron, fv.v, fv.w);
    c.closed_GR = shifted_GR(sol.G, sol.R, sol.K, c.transform);
    try {
      if (cls.kind == Recurrence::NullRecurrent) {
        c.closed_hats = shifted_hats_nullrec(sol, perron, c.transform, cls);
      } else if (kind != ShiftKind::Double) {
        c.closed_hats = shifted_hats_nonnull(sol, c.transform);
      } else {
        c.note = "no closed-form hat solutions for the double shift of a non-null chain";
      }
    } catch (const Error& e) {
      c.note = e.what();
    }
    try {
      c.solved = solve_direct(c.transform.poly(), options, false);
    } catch (const Error& e) {
      if (!c.note.empty()) c.note += "; ";
      c.note += std::string("shifted solve failed: ") + e.what();
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

}  // namespace qbd
