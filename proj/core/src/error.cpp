#include "volterra/error.hpp"

namespace volterra {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return "invalid input";
    case ErrorCode::kInvalidDesign:
      return "invalid design";
    case ErrorCode::kNyquistViolation:
      return "nyquist violation";
    case ErrorCode::kInconsistentSpectrum:
      return "inconsistent spectrum";
    case ErrorCode::kNumericOverflow:
      return "numeric overflow";
    case ErrorCode::kInvalidIndex:
      return "invalid index";
    case ErrorCode::kConfig:
      return "config error";
    case ErrorCode::kDivergence:
      return "divergence";
    case ErrorCode::kParse:
      return "parse error";
    case ErrorCode::kImplementationBug:
      return "implementation bug";
  }
  return "unknown error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace volterra
