#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace radner {

enum class ErrorCode {
  kInvalidArgument,
  kConfigInvalid,
  kStepSizeUnderflow,
  kNonFiniteRhs,
  kOutOfDomain,
  kResidualExceedsTolerance,
  kIdentityViolation,
  kClearingViolation,
  kBoundViolation,
  kInvalidMeasure,
  kHypothesisViolation,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the engine carries one of the codes above so the C
// API can translate it into a status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace radner
