#include "voltext/common/error.h"

namespace voltext {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kEmptyAfterClean: return "EmptyAfterClean";
    case ErrorCode::kEmptyVocabulary: return "EmptyVocabulary";
    case ErrorCode::kNoSubwords: return "NoSubwords";
    case ErrorCode::kTokenNotFound: return "TokenNotFound";
    case ErrorCode::kMalformedBenchmark: return "MalformedBenchmark";
    case ErrorCode::kTooFewPairs: return "TooFewPairs";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kTooFewReturns: return "TooFewReturns";
    case ErrorCode::kInsufficientHistory: return "InsufficientHistory";
    case ErrorCode::kDegenerateDesign: return "DegenerateDesign";
    case ErrorCode::kKernelTooLarge: return "KernelTooLarge";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNonPositiveForecast: return "NonPositiveForecast";
    case ErrorCode::kMisalignedSeries: return "MisalignedSeries";
    case ErrorCode::kNonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::kTooManyTokens: return "TooManyTokens";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
      code_(code),
      message_(what) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace voltext
