#pragma once

#include <stdexcept>
#include <string>

namespace hurwitz {

enum class ErrorCode {
  invalid_argument,
  parse_error,
  uniqueness_violation,
  division_by_zero,
  both_zero,
  zero_input,
  out_of_domain,
  no_stabilization,
  resolution_too_coarse,
  tail_too_large,
  no_convergence,
  bracket_failure,
  degenerate_sample,
  missing_input,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return "INVALID_ARGUMENT";
    case ErrorCode::parse_error: return "PARSE_ERROR";
    case ErrorCode::uniqueness_violation: return "UNIQUENESS_VIOLATION";
    case ErrorCode::division_by_zero: return "DIVISION_BY_ZERO";
    case ErrorCode::both_zero: return "BOTH_ZERO";
    case ErrorCode::zero_input: return "ZERO_INPUT";
    case ErrorCode::out_of_domain: return "OUT_OF_DOMAIN";
    case ErrorCode::no_stabilization: return "NO_STABILIZATION";
    case ErrorCode::resolution_too_coarse: return "RESOLUTION_TOO_COARSE";
    case ErrorCode::tail_too_large: return "TAIL_TOO_LARGE";
    case ErrorCode::no_convergence: return "NO_CONVERGENCE";
    case ErrorCode::bracket_failure: return "BRACKET_FAILURE";
    case ErrorCode::degenerate_sample: return "DEGENERATE_SAMPLE";
    case ErrorCode::missing_input: return "MISSING_INPUT";
  }
  return "UNKNOWN";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hurwitz
