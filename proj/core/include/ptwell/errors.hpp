#pragma once

#include <stdexcept>
#include <string>

namespace ptwell {

// Every failure the library can signal.  Codes in the first group mark input
// that violates a structural hypothesis (bad parity, no single well, ...);
// the rest are numerical failures of an otherwise well-posed computation.
// The distinction drives the CLI exit code (2 vs 3).
enum class ErrorCode {
  // hypothesis / input violations
  ParityViolation,
  EmptySpec,
  HypothesisViolation,
  SingleWellViolation,
  DegenerateTurningPoint,
  BadInput,
  // numerical failures
  NewtonDivergence,
  NonSimpleTurningPoint,
  RootCollision,
  BranchJump,
  NotConverged,
  EmptyWindow,
  OracleMissing,
  PathThroughTurningPoint,
  GridTooCoarse,
  StepUnstable,
  BoxTooSmall,
  ImaginaryResidue,
  ZeroOnBoundary,
  InsufficientResolution,
  StalledStep,
};

const char* error_name(ErrorCode code) noexcept;
bool is_hypothesis_violation(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const char* name() const noexcept { return error_name(code_); }
  bool hypothesis_violation() const noexcept { return is_hypothesis_violation(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace ptwell
