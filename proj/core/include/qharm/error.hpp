#pragma once
#include <stdexcept>
#include <string>

namespace qharm {

// Every failure mode the library reports deliberately.  Codes are stable API:
// tests and the CLI match on them, so add at the end, never reorder.
enum class ErrorCode {
  NegativeWeight,
  SumNotOne,
  CenterNonzero,
  ThreeConsecutiveZeros,
  NoConvergence,
  LevelMismatch,
  Overflow,
  OrderingViolation,
  DegenerateLeading,
  OutOfSegment,
  QuadratureDisagreement,
  NegativeIntegrand,
  DegenerateLattice,
  PoleAtLatticePoint,
  NonConvergence,
  RoundTripFailure,
  PoleAtX4,
  BranchFault,
  DomainFault,
  OutOfRange,
  PoleAtReference,
  DerivativeNonConvergence,
  ZeroDerivative,
  PoleCollision,
  PoleAtP,
  ZeroOfGamma,
  ZeroOfGammaTilde,
  OnKernelCurve,
  RadiusTooLarge,
  TorusOnKernel,
  NotSimpleWalk,
  EmptyRegime,
  ModelParse,
  InternalError,
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Filesystem-level problems (missing/unreadable model file).  Kept distinct
// from Error because the CLI maps it to a different exit code (66 vs 3).
class FileError : public std::runtime_error {
 public:
  explicit FileError(const std::string& what) : std::runtime_error(what) {}
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qharm
