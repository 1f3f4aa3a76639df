#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace obsdev {

enum class ErrorCode {
  InvalidArgument,
  NotSquare,
  DefectTooLarge,
  NotNormalized,
  DimensionMismatch,
  NonRealResult,
  NegativeVariance,
  SolverFailure,
  DomainError,
  ScalarOperator,
  BadNormalization,
  RadicandNegative,
  OutsideBall,
  IsProjection,
  NotOnSphere,
  AmbiguousClass,
  NotProjection,
  BadCompression,
  RankMismatch,
  StepsTooFew,
  BadRank,
  NotAPreserver,
  MixedSignature,
  OverlapViolation,
  PhaseDegeneracy,
  NotAnIsometry,
  NotLinearizable,
  InputError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above. Errors
// raised from a multi-stage pipeline (the preserver decompositions) also name
// the stage that rejected the input.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string stage = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  ErrorCode code_;
  std::string stage_;
};

}  // namespace obsdev
