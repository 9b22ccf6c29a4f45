#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rasqp {

enum class ErrorCode : std::uint8_t {
  DimensionMismatch,
  NotSymmetric,
  NotPositiveDefinite,
  FactorizationFailure,
  InvalidPartition,
  InvalidProbability,
  CategoryLeak,
  DimensionTooLarge,
  NoKktPoint,
  InvalidArgument,
  ParseError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::FactorizationFailure: return "FactorizationFailure";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::InvalidProbability: return "InvalidProbability";
    case ErrorCode::CategoryLeak: return "CategoryLeak";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::NoKktPoint: return "NoKktPoint";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Exception thrown by every rasqp routine.
///
/// `detail()` carries an operation-specific integer: the failing pivot for
/// NotPositiveDefinite, the 1-based line number for ParseError, -1 otherwise.
class QpError : public std::runtime_error {
 public:
  QpError(ErrorCode code, const std::string& what, std::int64_t detail = -1)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  std::int64_t detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::int64_t detail_;
};

}  // namespace rasqp
