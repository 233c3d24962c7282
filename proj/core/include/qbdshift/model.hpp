#pragma once

// QBD level-transition blocks, validation against the standing assumptions,
// and drift / spectral classification.

#include <string>
#include <string_view>
#include <vector>

#include "qbdshift/kernel.hpp"
#include "qbdshift/matpoly.hpp"

namespace qbd {

/// Validated triple (A_{-1}, A_0, A_1): nonnegative, stochastic irreducible sum.
/// Only `validate` constructs one.
class QbdTriple {
 public:
  Eigen::Index n() const { return a_zero_.rows(); }
  const Matrix& a_minus() const { return a_minus_; }
  const Matrix& a_zero() const { return a_zero_; }
  const Matrix& a_plus() const { return a_plus_; }

  /// A(z) = A_{-1} + z A_0 + z^2 A_1.
  Matrix eval_A(double z) const { return a_minus_ + z * a_zero_ + (z * z) * a_plus_; }
  Matrix sum() const { return a_minus_ + a_zero_ + a_plus_; }
  QuadMatPoly poly() const { return QuadMatPoly::from_blocks(a_minus_, a_zero_, a_plus_); }

  /// The triple (A_1, A_0, A_{-1}): its G and R are this triple's G-hat and R-hat.
  QbdTriple reversed() const;

  /// Non-fatal findings (e.g. extra unit-modulus roots).
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  friend QbdTriple validate(const Matrix&, const Matrix&, const Matrix&);
  QbdTriple(Matrix a_minus, Matrix a_zero, Matrix a_plus)
      : a_minus_(std::move(a_minus)), a_zero_(std::move(a_zero)), a_plus_(std::move(a_plus)) {}

  Matrix a_minus_;
  Matrix a_zero_;
  Matrix a_plus_;
  std::vector<std::string> warnings_;
};

inline constexpr double kRowSumTolerance = 1e-12;

/// Hard errors (ValidationError): shape, non-finite or negative entries,
/// row sums of the total off by more than kRowSumTolerance, reducible total.
/// Warning: a root of B(z) of unit modulus other than z = 1.
QbdTriple validate(const Matrix& a_minus, const Matrix& a_zero, const Matrix& a_plus);

enum class Recurrence { PositiveRecurrent, NullRecurrent, Transient };

std::string_view to_string(Recurrence kind);
/// Accepts the enum names and the short forms "positive", "null", "transient".
Recurrence parse_recurrence(std::string_view text);

inline constexpr double kNullDriftTolerance = 1e-12;

struct Classification {
  Recurrence kind = Recurrence::PositiveRecurrent;
  double drift = 0.0;  // theta^T A_1 e - theta^T A_{-1} e
  double xi_n = 1.0;   // largest root modulus inside the closed unit disk
  double xi_n1 = 1.0;  // smallest root modulus outside the open unit disk
  RootSet roots;

  /// Classification of the reversed triple.
  Classification reversed() const;
};

/// Stationary vector of A_{-1} + A_0 + A_1 (unit sum).
Vector stationary_vector(const QbdTriple& model);
double drift(const QbdTriple& model);

Classification classify(const QbdTriple& model);

/// Perron vectors attached to G, R, G-hat, R-hat, unit infinity norm.
///
///   u_G, v_Rhat : right / left Perron vectors of A(xi_n)
///   u_Ghat, v_R : right / left Perron vectors of A(xi_{n+1})
///   v_G, u_R, v_Ghat, u_Rhat : from the solved matrices, see with_solutions
///
/// In the recurrent cases u_G = e; in the transient and null cases u_Ghat = e.
struct PerronData {
  Vector u_G, v_G, u_Ghat, v_Ghat, u_R, v_R, u_Rhat, v_Rhat;

  bool has_solution_vectors() const { return v_G.size() > 0; }

  /// Perron data of the reversed triple: roles of (G, R) and (G-hat, R-hat) swap.
  PerronData reversed() const;

  /// Fills v_G, u_R, v_Ghat, u_Rhat from the minimal solutions.
  PerronData with_solutions(const Matrix& g, const Matrix& r, const Matrix& g_hat,
                            const Matrix& r_hat) const;
};

/// Vectors available before solving (from A(xi_n) and A(xi_{n+1})).
PerronData perron_data(const QbdTriple& model, const Classification& cls);

}  // namespace qbd
