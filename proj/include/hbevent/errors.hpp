#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hbevent {

enum class ErrorKind {
  DegenerateSeries,
  UnboundSymbol,
  SignAmbiguity,
  InvalidDefinition,
  NoConvergence,
  StateResolutionFailure,
  GrazingTransition,
  SingularJacobian,
  MaxIterations,
  StepCollapse,
  SingularMassMatrix,
  EventStorm,
  ScheduleFailure,
  InvalidArgument,
  IoError,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateSeries: return "DegenerateSeries";
    case ErrorKind::UnboundSymbol: return "UnboundSymbol";
    case ErrorKind::SignAmbiguity: return "SignAmbiguity";
    case ErrorKind::InvalidDefinition: return "InvalidDefinition";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::StateResolutionFailure: return "StateResolutionFailure";
    case ErrorKind::GrazingTransition: return "GrazingTransition";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::StepCollapse: return "StepCollapse";
    case ErrorKind::SingularMassMatrix: return "SingularMassMatrix";
    case ErrorKind::EventStorm: return "EventStorm";
    case ErrorKind::ScheduleFailure: return "ScheduleFailure";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hbevent
