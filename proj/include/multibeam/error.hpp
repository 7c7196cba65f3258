#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace multibeam {

enum class ErrorCode {
  NonHermitian,
  ConvergenceFailure,
  TraceNotOne,
  NotPositive,
  DimensionMismatch,
  IndexOutOfRange,
  SameIndex,
  UnsupportedMoment,
  InvalidGram,
  OutOfRange,
  WrongBeamCount,
  NotUnit,
  CountMismatch,
  InvalidPovm,
  TooLarge,
  WrongDimension,
  InfeasibleStart,
  DomainError,
  NotSymmetric,
  TooFewPairs,
  NoRankOneForm,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; code() identifies the
// precondition or contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace multibeam
