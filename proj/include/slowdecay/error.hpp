#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slowdecay {

enum class ErrorKind {
  InvalidParameters,
  DegenerateExponents,
  NoNonnegativeRoot,
  NegativeBase,
  SeriesInvalid,
  DomainError,
  StepUnderflow,
  MaxSteps,
  PositivityLost,
  InsufficientCoverage,
  WindowTooShort,
  NonpositiveForcing,
  NotApplicable,
  ClassMismatch,
  ConstructionInapplicable,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Errors raised by the library. The kind is stable and machine readable;
/// the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace slowdecay
