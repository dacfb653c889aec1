#pragma once

#include <stdexcept>
#include <string>

namespace volterra {

enum class ErrorCode {
  kInvalidInput,
  kInvalidDesign,
  kNyquistViolation,
  kInconsistentSpectrum,
  kNumericOverflow,
  kInvalidIndex,
  kConfig,
  kDivergence,
  kParse,
  kImplementationBug,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (and the CLI) can map it to a diagnostic without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace volterra
