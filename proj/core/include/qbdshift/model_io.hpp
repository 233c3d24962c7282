#pragma once

// JSON model files: {"n", "a_minus", "a_zero", "a_plus", "meta"?} with the
// blocks stored as row-major arrays of length n^2.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qbdshift/kernel.hpp"

namespace qbd {

struct ModelFile {
  Eigen::Index n = 0;
  Matrix a_minus, a_zero, a_plus;
  std::optional<std::string> name;
  std::optional<std::uint64_t> seed;
  /// The "meta" object verbatim (compact JSON), empty when absent.
  std::string meta_json;
};

/// Throws ParseError with "source:line:column" context.
ModelFile parse_model(std::string_view text, std::string_view source = "<input>");
ModelFile read_model_file(const std::string& path);

/// Pretty-printed JSON with round-trip exact doubles.
std::string write_model(const ModelFile& model);

}  // namespace qbd
