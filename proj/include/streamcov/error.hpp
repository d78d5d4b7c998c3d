#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace streamcov {

enum class ErrorCode {
  dim,
  nonfinite_input,
  insufficient_observations,
  zero_reference,
  short_trajectory,
  empty_calibration,
  invalid_quantile,
  bad_spec,
  not_positive_definite,
  too_few_samples,
  empty,
  bad_format,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::dim: return "dim";
    case ErrorCode::nonfinite_input: return "nonfinite-input";
    case ErrorCode::insufficient_observations: return "insufficient-observations";
    case ErrorCode::zero_reference: return "zero-reference";
    case ErrorCode::short_trajectory: return "short-trajectory";
    case ErrorCode::empty_calibration: return "empty-calibration";
    case ErrorCode::invalid_quantile: return "invalid-quantile";
    case ErrorCode::bad_spec: return "bad-spec";
    case ErrorCode::not_positive_definite: return "not-positive-definite";
    case ErrorCode::too_few_samples: return "too-few-samples";
    case ErrorCode::empty: return "empty";
    case ErrorCode::bad_format: return "bad-format";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message is prefixed with the code's string form.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace streamcov
