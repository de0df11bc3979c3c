#include "error.hpp"

namespace radner {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kStepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::kNonFiniteRhs: return "NonFiniteRhs";
    case ErrorCode::kOutOfDomain: return "OutOfDomain";
    case ErrorCode::kResidualExceedsTolerance: return "ResidualExceedsTolerance";
    case ErrorCode::kIdentityViolation: return "IdentityViolation";
    case ErrorCode::kClearingViolation: return "ClearingViolation";
    case ErrorCode::kBoundViolation: return "BoundViolation";
    case ErrorCode::kInvalidMeasure: return "InvalidMeasure";
    case ErrorCode::kHypothesisViolation: return "HypothesisViolation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace radner
