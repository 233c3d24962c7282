#pragma once

// Seeded random QBD instances of a prescribed recurrence class.

#include <cstdint>
#include <optional>

#include "qbdshift/kernel.hpp"
#include "qbdshift/model.hpp"

namespace qbd {

struct GenOptions {
  Recurrence kind = Recurrence::PositiveRecurrent;
  Eigen::Index n = 2;
  std::uint64_t seed = 1;
  /// Target drift for the positive recurrent / transient classes; its sign
  /// is forced to match `kind`.  Default: magnitude uniform in [0.02, 0.2].
  std::optional<double> drift;
};

struct GeneratedModel {
  Matrix a_minus, a_zero, a_plus;
  Recurrence kind = Recurrence::PositiveRecurrent;
  std::uint64_t seed = 1;
  double target_drift = 0.0;
};

/// Uniform positive blocks X (down), Y (up), Z (local) with 1e-3 added on
/// the cycle i -> i+1 of Z, rows normalized so the sum is stochastic.  Null
/// recurrent instances use Y = X, so A_{-1} = A_1 exactly.  Otherwise X is
/// scaled by a bisected factor until the drift reaches the target.
GeneratedModel generate(const GenOptions& options);

}  // namespace qbd
