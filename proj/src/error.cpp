#include "slowdecay/error.hpp"

namespace slowdecay {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameters: return "InvalidParameters";
    case ErrorKind::DegenerateExponents: return "DegenerateExponents";
    case ErrorKind::NoNonnegativeRoot: return "NoNonnegativeRoot";
    case ErrorKind::NegativeBase: return "NegativeBase";
    case ErrorKind::SeriesInvalid: return "SeriesInvalid";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::MaxSteps: return "MaxSteps";
    case ErrorKind::PositivityLost: return "PositivityLost";
    case ErrorKind::InsufficientCoverage: return "InsufficientCoverage";
    case ErrorKind::WindowTooShort: return "WindowTooShort";
    case ErrorKind::NonpositiveForcing: return "NonpositiveForcing";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::ClassMismatch: return "ClassMismatch";
    case ErrorKind::ConstructionInapplicable: return "ConstructionInapplicable";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace slowdecay
