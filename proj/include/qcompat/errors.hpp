#pragma once

#include <stdexcept>
#include <string>

namespace qcompat {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

/// Malformed or unreadable input file.
class ParseError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ParseError"; }
};

/// Input violates a mathematical precondition (not a state, wrong size, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ValidationError"; }
};

#define QCOMPAT_VALIDATION_ERROR(Name)                          \
  class Name : public ValidationError {                         \
   public:                                                      \
    using ValidationError::ValidationError;                     \
    const char* kind() const noexcept override { return #Name; } \
  }

QCOMPAT_VALIDATION_ERROR(NotHermitian);
QCOMPAT_VALIDATION_ERROR(NotPSD);
QCOMPAT_VALIDATION_ERROR(TraceNotOne);
QCOMPAT_VALIDATION_ERROR(NotAnEffect);
QCOMPAT_VALIDATION_ERROR(NotUnitVector);
QCOMPAT_VALIDATION_ERROR(DimensionMismatch);
QCOMPAT_VALIDATION_ERROR(InvalidRank);
QCOMPAT_VALIDATION_ERROR(InvalidWeights);
QCOMPAT_VALIDATION_ERROR(InvalidArgument);
QCOMPAT_VALIDATION_ERROR(IncompleteMap);

#undef QCOMPAT_VALIDATION_ERROR

/// No optimizer restart produced a certificate within the feasibility tolerance.
class Infeasible : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "Infeasible"; }
};

/// A pure-state map is not implemented by any unitary or antiunitary operator.
/// `probe()` names the input (or pair of inputs) that exposed the failure.
class NotASymmetry : public Error {
 public:
  NotASymmetry(const std::string& what, std::string probe)
      : Error(what), probe_(std::move(probe)) {}
  const char* kind() const noexcept override { return "NotASymmetry"; }
  const std::string& probe() const noexcept { return probe_; }

 private:
  std::string probe_;
};

}  // namespace qcompat
