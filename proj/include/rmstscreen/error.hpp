#pragma once

#include <stdexcept>
#include <string>

namespace rmstscreen {

// Every failure the library reports carries one of these codes. The C API
// maps them onto status values; the CLI maps input errors onto exit code 2.
enum class ErrorCode {
  kInvalidArgument,
  kMissingFile,
  kMissingColumn,
  kNonNumericCell,
  kMissingValue,
  kInvalidStatus,
  kNegativeTime,
  kNoEvents,
  kInvertedInterval,
  kNoFiniteIntervals,
  kShapeMismatch,
  kConstantCovariate,
  kDegenerateColumn,
  kUnknownScenario,
  kUnattainable,
  kNumerical,
  kIo,
};

const char* error_code_name(ErrorCode code) noexcept;

// True for codes caused by user input (bad files, flags, data) rather than
// by a failure inside the library.
bool is_input_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rmstscreen
