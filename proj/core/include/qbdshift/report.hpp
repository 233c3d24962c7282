#pragma once

// JSON ("schema": 1) and plain-text renderings of solve and bench reports.
// Non-finite numbers are written as null.

#include <string>

#include "qbdshift/pipeline.hpp"

namespace qbd {

inline constexpr int kReportSchema = 1;

/// `with_timing` = false drops the timing fields for byte-stable output.
std::string to_json(const SolveReport& report, bool with_timing = true);
std::string to_text(const SolveReport& report);

std::string to_json(const BenchReport& report, bool with_timing = true);
std::string to_text(const BenchReport& report);

}  // namespace qbd
