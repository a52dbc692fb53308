#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reinstab {

enum class ErrorCode {
  SingularDynamics,
  NonMetzler,
  NotHurwitz,
  PreconditionViolated,
  RelativeDegreeNotOne,
  ImproperTransfer,
  EvaluationAtPole,
  InadmissibleSetPoint,
  NoSteadyState,
  AssumptionViolated,
  NoCertificateFound,
  StiffnessSuspected,
  ParseError,
  SchemaViolation,
  NegativeBasal,
  NonPositiveParameter,
  InvalidTerm,
  DimensionMismatch,
  NegativeState,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SingularDynamics: return "SingularDynamics";
    case ErrorCode::NonMetzler: return "NonMetzler";
    case ErrorCode::NotHurwitz: return "NotHurwitz";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::RelativeDegreeNotOne: return "RelativeDegreeNotOne";
    case ErrorCode::ImproperTransfer: return "ImproperTransfer";
    case ErrorCode::EvaluationAtPole: return "EvaluationAtPole";
    case ErrorCode::InadmissibleSetPoint: return "InadmissibleSetPoint";
    case ErrorCode::NoSteadyState: return "NoSteadyState";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::NoCertificateFound: return "NoCertificateFound";
    case ErrorCode::StiffnessSuspected: return "StiffnessSuspected";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::NegativeBasal: return "NegativeBasal";
    case ErrorCode::NonPositiveParameter: return "NonPositiveParameter";
    case ErrorCode::InvalidTerm: return "InvalidTerm";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NegativeState: return "NegativeState";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable code and, for document errors, a
/// JSON pointer to the offending value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string path = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        path_(std::move(path)) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] const std::string& path() const noexcept { return path_; }

 private:
  ErrorCode code_;
  std::string path_;
};

}  // namespace reinstab
