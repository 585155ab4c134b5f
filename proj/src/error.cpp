#include "rmstscreen/error.hpp"

namespace rmstscreen {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kMissingFile: return "missing file";
    case ErrorCode::kMissingColumn: return "missing column";
    case ErrorCode::kNonNumericCell: return "non-numeric cell";
    case ErrorCode::kMissingValue: return "missing value";
    case ErrorCode::kInvalidStatus: return "invalid status value";
    case ErrorCode::kNegativeTime: return "negative time";
    case ErrorCode::kNoEvents: return "no observed events";
    case ErrorCode::kInvertedInterval: return "inverted interval";
    case ErrorCode::kNoFiniteIntervals: return "no finite intervals";
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kConstantCovariate: return "constant covariate";
    case ErrorCode::kDegenerateColumn: return "degenerate basis column";
    case ErrorCode::kUnknownScenario: return "unknown scenario";
    case ErrorCode::kUnattainable: return "unattainable target";
    case ErrorCode::kNumerical: return "numerical failure";
    case ErrorCode::kIo: return "i/o failure";
  }
  return "unknown error";
}

bool is_input_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kNumerical:
    case ErrorCode::kIo:
      return false;
    default:
      return true;
  }
}

}  // namespace rmstscreen
