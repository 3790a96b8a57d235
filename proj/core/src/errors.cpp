#include "ptwell/errors.hpp"

namespace ptwell {

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParityViolation: return "ParityViolation";
    case ErrorCode::EmptySpec: return "EmptySpec";
    case ErrorCode::HypothesisViolation: return "HypothesisViolation";
    case ErrorCode::SingleWellViolation: return "SingleWellViolation";
    case ErrorCode::DegenerateTurningPoint: return "DegenerateTurningPoint";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::NewtonDivergence: return "NewtonDivergence";
    case ErrorCode::NonSimpleTurningPoint: return "NonSimpleTurningPoint";
    case ErrorCode::RootCollision: return "RootCollision";
    case ErrorCode::BranchJump: return "BranchJump";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::OracleMissing: return "OracleMissing";
    case ErrorCode::PathThroughTurningPoint: return "PathThroughTurningPoint";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::StepUnstable: return "StepUnstable";
    case ErrorCode::BoxTooSmall: return "BoxTooSmall";
    case ErrorCode::ImaginaryResidue: return "ImaginaryResidue";
    case ErrorCode::ZeroOnBoundary: return "ZeroOnBoundary";
    case ErrorCode::InsufficientResolution: return "InsufficientResolution";
    case ErrorCode::StalledStep: return "StalledStep";
  }
  return "UnknownError";
}

bool is_hypothesis_violation(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParityViolation:
    case ErrorCode::EmptySpec:
    case ErrorCode::HypothesisViolation:
    case ErrorCode::SingleWellViolation:
    case ErrorCode::DegenerateTurningPoint:
    case ErrorCode::BadInput:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace ptwell
