#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace voltext {

enum class ErrorCode {
  kTooShort,
  kEmptyAfterClean,
  kEmptyVocabulary,
  kNoSubwords,
  kTokenNotFound,
  kMalformedBenchmark,
  kTooFewPairs,
  kFormatError,
  kIoError,
  kTooFewReturns,
  kInsufficientHistory,
  kDegenerateDesign,
  kKernelTooLarge,
  kShapeMismatch,
  kNonPositiveForecast,
  kMisalignedSeries,
  kNonFiniteGradient,
  kTooManyTokens,
  kConfigError,
  kInvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported as Error; code() identifies the
// contract violation so callers can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }
  // what() without the leading code name.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace voltext
