#include "obsdev/error.hpp"

#include <utility>

namespace obsdev {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::DefectTooLarge: return "DefectTooLarge";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonRealResult: return "NonRealResult";
    case ErrorCode::NegativeVariance: return "NegativeVariance";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ScalarOperator: return "ScalarOperator";
    case ErrorCode::BadNormalization: return "BadNormalization";
    case ErrorCode::RadicandNegative: return "RadicandNegative";
    case ErrorCode::OutsideBall: return "OutsideBall";
    case ErrorCode::IsProjection: return "IsProjection";
    case ErrorCode::NotOnSphere: return "NotOnSphere";
    case ErrorCode::AmbiguousClass: return "AmbiguousClass";
    case ErrorCode::NotProjection: return "NotProjection";
    case ErrorCode::BadCompression: return "BadCompression";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::StepsTooFew: return "StepsTooFew";
    case ErrorCode::BadRank: return "BadRank";
    case ErrorCode::NotAPreserver: return "NotAPreserver";
    case ErrorCode::MixedSignature: return "MixedSignature";
    case ErrorCode::OverlapViolation: return "OverlapViolation";
    case ErrorCode::PhaseDegeneracy: return "PhaseDegeneracy";
    case ErrorCode::NotAnIsometry: return "NotAnIsometry";
    case ErrorCode::NotLinearizable: return "NotLinearizable";
    case ErrorCode::InputError: return "InputError";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message,
                           const std::string& stage) {
  std::string out(to_string(code));
  if (!stage.empty()) out += " [" + stage + "]";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::string stage)
    : std::runtime_error(format_message(code, message, stage)),
      code_(code),
      stage_(std::move(stage)) {}

}  // namespace obsdev
