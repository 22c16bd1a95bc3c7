#pragma once

#include <stdexcept>
#include <string>

namespace fxclust {

// Every failure mode raised by the library. Codes are grouped into two
// categories that drive the CLI exit codes: problems with the input data or
// configuration (exit 2) and numeric/degenerate conditions discovered during
// computation (exit 3).
enum class ErrorCode {
  // input / configuration
  IoError,
  ConfigError,
  MalformedRow,
  NonPositivePrice,
  DuplicateDate,
  EmptyIntersection,
  TooFewDates,
  OrientationUnknown,
  SeriesTooShort,
  LengthMismatch,
  GridMismatch,
  NonPositiveBinWidth,
  LabelMismatch,
  // numeric / degenerate
  DegenerateSeries,
  UndefinedKL,
  NonPositiveKurtosis,
  InvalidMatrix,
  DegenerateHeights,
};

enum class ErrorCategory { input, numeric };

constexpr ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateSeries:
    case ErrorCode::UndefinedKL:
    case ErrorCode::NonPositiveKurtosis:
    case ErrorCode::InvalidMatrix:
    case ErrorCode::DegenerateHeights:
      return ErrorCategory::numeric;
    default:
      return ErrorCategory::input;
  }
}

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const { return code_; }
  ErrorCategory category() const { return category_of(code_); }

  // The message without the code-name prefix that what() carries, so wrappers
  // can prepend context without duplicating the prefix.
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace fxclust
