#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmc {

/// Failure categories. The CLI prints these names verbatim, so treat them as
/// a stable, machine-parseable vocabulary.
enum class ErrorCode {
  InvalidArgument,
  IncompleteYear,
  DimensionMismatch,
  SeasonOutOfRange,
  ZeroEigenvalue,
  SingularSimilarity,
  SeriesTooShort,
  PeriodMismatch,
  ZeroSeedEntry,
  SingularSystem,
  DegenerateSeeds,
  NonStationaryCoefficients,
  InsufficientData,
  CollinearLags,
  OptimizerFailed,
  OrderTooHigh,
  InsufficientHistory,
  DegenerateVariance,
  FitFailed,
  AlignmentError,
  FileNotFound,
  ParseError,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IncompleteYear: return "IncompleteYear";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SeasonOutOfRange: return "SeasonOutOfRange";
    case ErrorCode::ZeroEigenvalue: return "ZeroEigenvalue";
    case ErrorCode::SingularSimilarity: return "SingularSimilarity";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::PeriodMismatch: return "PeriodMismatch";
    case ErrorCode::ZeroSeedEntry: return "ZeroSeedEntry";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::DegenerateSeeds: return "DegenerateSeeds";
    case ErrorCode::NonStationaryCoefficients: return "NonStationaryCoefficients";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::CollinearLags: return "CollinearLags";
    case ErrorCode::OptimizerFailed: return "OptimizerFailed";
    case ErrorCode::OrderTooHigh: return "OrderTooHigh";
    case ErrorCode::InsufficientHistory: return "InsufficientHistory";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::FitFailed: return "FitFailed";
    case ErrorCode::AlignmentError: return "AlignmentError";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace pmc
