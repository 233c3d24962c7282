#pragma once

// Residual certificates for the identities, factorizations, sign property
// and phase structure of a solved instance.

#include <string>
#include <string_view>
#include <vector>

#include "qbdshift/kernel.hpp"
#include "qbdshift/model.hpp"
#include "qbdshift/shift.hpp"
#include "qbdshift/solvers.hpp"

namespace qbd {

enum class Verdict { Pass, Fail, NotApplicable, Informational };

std::string_view to_string(Verdict verdict);

struct Certificate {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::NotApplicable;
  std::string context;

  bool failed() const { return verdict == Verdict::Fail; }
};

/// Pass iff residual <= tolerance (NaN fails).
Certificate certify(std::string name, double residual, double tolerance, std::string context = {});
Certificate not_applicable(std::string name, std::string reason);
Certificate informational(std::string name, double residual, std::string context = {});

std::size_t count_failures(const std::vector<Certificate>& certs);
const Certificate* find_certificate(const std::vector<Certificate>& certs, std::string_view name);

struct SuiteOptions {
  double identity = 1e-10;
  double spectral = 1e-7;
  double equivalence = 1e-8;
  int samples = kDefaultSamples;
};

inline constexpr double kMMatrixSlack = 1e-12;

/// Off-diagonal entries <= 0 and M^{-1} >= -kMMatrixSlack entrywise.
/// The residual is the worst violation (0 when both hold, +inf if singular).
Certificate check_mmatrix(const Matrix& m, std::string name = "mmatrix");

/// v_G^T K^{-1} u_R < 0 and v_Ghat^T K-hat^{-1} u_Rhat < 0 with unit-max
/// vectors.  Residual is the larger of the two pairings; tolerance -1e-14.
Certificate check_sign_property(const SolutionSet& sol, const PerronData& perron);

/// Phase sets built from u = u_R, w = -K^{-1} u_R and v = v_G:
///   s1       = {u > 0}, the single irreducible class of R
///   s1_tilde = {u = 0, w > 0}
///   sb_tilde = {w = 0} minus sa
///   sa       = {v > 0}, the single irreducible class of G
/// Without the contradiction hypothesis sa may meet s1 or s1_tilde; what is
/// required is w >= u, non-empty s1 and sa, and v^T w > 0.
struct PhasePartition {
  std::vector<int> s1, s1_tilde, sb_tilde, sa;
  Vector u, w, v;
};

inline constexpr double kSignZeroRelative = 1e-9;

/// Throws VerificationError naming the violated row of the sign table.
PhasePartition phase_partition(const SolutionSet& sol, const PerronData& perron);
Certificate check_phase_partition(const SolutionSet& sol, const PerronData& perron);

/// Every identity of the original problem and of each shift case.
std::vector<Certificate> check_identity_suite(const QbdTriple& model, const Classification& cls,
                                              const PerronData& perron, const SolutionSet& sol,
                                              const std::vector<ShiftCase>& cases,
                                              const SuiteOptions& options = {});

/// Spectrum of `m` as a root multiset.
std::vector<Root> spectrum(const Matrix& m);

/// Roots of B with the entries nearest xi_n and xi_{n+1} snapped to their
/// exact values and then replaced per `kind` (xi_n -> 0, xi_{n+1} -> inf).
std::vector<Root> expected_shifted_roots(const RootSet& original, const Classification& cls, ShiftKind kind);

}  // namespace qbd
