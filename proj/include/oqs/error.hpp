#pragma once

#include <stdexcept>
#include <string>

namespace oqs {

enum class ErrorCode {
  kInvalidArgument = 1,
  kDimensionMismatch,
  kUnknownWire,
  kPsdViolation,
  kInvalidChannel,
  kNotInvertible,
  kDecomposition,
  kParse,
  kNumericalViolation,
};

// Every failure raised by the core library carries one of the codes above so
// that the C API can map it onto a status value without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when a state produced during simulation breaks a density-matrix
// invariant. Carries the name of the invariant and the step index.
class NumericalViolation : public Error {
 public:
  NumericalViolation(std::string invariant, int step, const std::string& what)
      : Error(ErrorCode::kNumericalViolation, what),
        invariant_(std::move(invariant)),
        step_(step) {}

  const std::string& invariant() const noexcept { return invariant_; }
  int step() const noexcept { return step_; }

 private:
  std::string invariant_;
  int step_;
};

}  // namespace oqs
