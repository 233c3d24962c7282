#pragma once

// Right, left and double shifts of a QBD triple, the closed-form maps
// between original and shifted solutions, and the solve-by-shift route.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbdshift/kernel.hpp"
#include "qbdshift/matpoly.hpp"
#include "qbdshift/model.hpp"
#include "qbdshift/solvers.hpp"

namespace qbd {

enum class ShiftKind { Right, Left, Double };
enum class Route { Direct, Right, Left, Double, Auto };

std::string_view to_string(ShiftKind kind);
std::string_view to_string(Route route);
/// Accepts direct, right, left, double, auto (also "double-shift" etc.).
Route parse_route(std::string_view text);

/// Double for null recurrent, right for positive recurrent, left for transient.
ShiftKind auto_kind(Recurrence kind);

inline constexpr double kPairingTolerance = 1e-13;
inline constexpr double kDoubleFormTolerance = 1e-12;

struct ShiftTransform {
  ShiftKind kind = ShiftKind::Right;
  double xi_n = 1.0;
  double xi_n1 = 1.0;

  // Right / Double: Q = u_G v^T with u_G^T v = 1.
  std::optional<Matrix> Q;
  Vector u_G, v;
  // Left / Double: S = w v_R^T with v_R^T w = 1 (v_R is rescaled, w kept).
  std::optional<Matrix> S;
  Vector w, v_R;

  // Shifted coefficients; row sums need not be one.
  Matrix a_minus, a_zero, a_plus;
  // Double only: || first form of A_0^d - second form ||_inf.
  double a_zero_gap = 0.0;

  bool has_Q() const { return Q.has_value(); }
  bool has_S() const { return S.has_value(); }
  QuadMatPoly poly() const { return QuadMatPoly::from_blocks(a_minus, a_zero, a_plus); }
};

/// A_{-1}(I - Q), A_0 + xi_n A_1 Q, A_1.  `v` is rescaled so u_G^T v = 1;
/// throws ShiftError when u_G^T v vanishes.
ShiftTransform build_right(const QbdTriple& model, const Classification& cls, const PerronData& perron,
                           const Vector& v);
/// A_{-1}, A_0 + xi_{n+1}^{-1} S A_{-1}, (I - S) A_1.  v_R is rescaled so
/// v_R^T w = 1; throws ShiftError when v_R^T w vanishes.
ShiftTransform build_left(const QbdTriple& model, const Classification& cls, const PerronData& perron,
                          const Vector& w);
/// Both shifts.  Both forms of A_0^d are computed; ShiftError when they
/// differ by more than kDoubleFormTolerance (relative to ||A_0||, at least 1).
ShiftTransform build_double(const QbdTriple& model, const Classification& cls, const PerronData& perron,
                            const Vector& v, const Vector& w);
ShiftTransform build_shift(ShiftKind kind, const QbdTriple& model, const Classification& cls,
                           const PerronData& perron, const Vector& v, const Vector& w);

/// Free vectors known before solving: v = e / (u_G^T e), w = e / (v_R^T e).
struct FreeVectors {
  Vector v, w;
};
FreeVectors a_priori_vectors(const PerronData& perron);

/// Defaults that satisfy every admissibility condition: v = v_Ghat with
/// u_G^T v = 1 and w = u_Rhat.  For null recurrent chains w is further
/// scaled so v^T K-hat^{-1} w = -1.  Needs the solution vectors in `perron`.
FreeVectors default_vectors(const PerronData& perron, const Classification& cls, const Matrix& k_hat);

struct ShiftedGR {
  Matrix G, R, K;
};

/// Right: (G - xi_n Q, R, K); Left: (G, R - xi_{n+1}^{-1} S, K); Double: both.
ShiftedGR shifted_GR(const Matrix& g, const Matrix& r, const Matrix& k, const ShiftTransform& t);

struct RecoveredGR {
  Matrix G, R;
  double residual_G = 0.0;  // against the original equations
  double residual_R = 0.0;
};

/// Inverse of shifted_GR.  Throws VerificationError when the recovered pair
/// misses the original equations by more than `tolerance`.
RecoveredGR recover_GR(const Matrix& g_s, const Matrix& r_s, const ShiftTransform& t,
                       const QuadMatPoly& original, double tolerance = 1e-10);

struct ShiftedHats {
  Matrix G_hat, R_hat, K_hat;
  std::optional<Matrix> W;              // W_r or W_l (non-null cases)
  std::optional<Matrix> K_hat_compact;  // double, null recurrent: K-hat - u_Rhat v_Ghat^T
};

/// Null-recurrent closed forms for the hat side.  The fixed vector of the
/// transform (v for right, w for left, both for double) is used as v_Ghat /
/// u_Rhat; the other one is taken from `perron` and scaled so that
/// v_Ghat^T K-hat^{-1} u_Rhat = -1.  For Double that pairing must already
/// hold.  K-hat_d comes from A_{-1}^d G-hat_d + A_0^d - I.
ShiftedHats shifted_hats_nullrec(const SolutionSet& sol, const PerronData& perron, const ShiftTransform& t,
                                 const Classification& cls);

inline constexpr double kAdmissibilityMargin = 1e-8;

/// Non-null closed forms through W_r = W - xi_n Q W R or
/// W_l = W - xi_{n+1}^{-1} G W S; G-hat_s = W_s R_s W_s^{-1},
/// R-hat_s = W_s^{-1} G_s W_s, K-hat_s = A_0^s - I + A_{-1}^s G-hat_s.
/// Throws ShiftError for Double or when the admissibility margin fails.
ShiftedHats shifted_hats_nonnull(const SolutionSet& sol, const ShiftTransform& t);

struct SolveOptions {
  Route route = Route::Auto;
  CrOptions cr;
  /// Convergence tolerance used by direct solves of null recurrent chains.
  double null_tol = 1e-8;
  double recover_tol = 1e-10;
};

struct SideReport {
  Route route = Route::Direct;
  int iterations = 0;
  bool converged = true;
  double rate = 0.0;
  std::optional<ShiftTransform> transform;
};

struct SolveResult {
  SolutionSet solution;
  SideReport g_side;    // G, R, K
  SideReport hat_side;  // G-hat, R-hat, K-hat (solved on the reversed triple)
};

/// Solves all four equations.  Non-direct routes shift with a_priori_vectors,
/// run cyclic reduction on the shifted triple and recover.  The hat side
/// reuses the same machinery on the reversed triple with the mirrored route
/// (right and left exchange).
SolveResult solve(const QbdTriple& model, const Classification& cls, const PerronData& perron,
                  const SolveOptions& options = {});

/// One shift of a solved instance with everything needed to certify it.
struct ShiftCase {
  ShiftTransform transform;
  ShiftedGR closed_GR;
  std::optional<ShiftedHats> closed_hats;
  std::optional<SolutionSet> solved;  // independent cyclic reduction on the shifted triple
  std::string note;                   // why a piece is missing, if any
};

/// Right, left and double cases with default_vectors.
std::vector<ShiftCase> build_shift_cases(const QbdTriple& model, const Classification& cls,
                                         const PerronData& perron, const SolutionSet& sol,
                                         const CrOptions& options = {});

}  // namespace qbd
