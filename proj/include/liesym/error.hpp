#pragma once

#include <stdexcept>
#include <string>

namespace liesym {

enum class ErrorKind {
  OpaqueNoDerivative,
  UnboundSymbol,
  DivisionByZero,
  ParseError,
  DimensionMismatch,
  NotVertical,
  NotClosed,
  DependentBasis,
  MissingDerivative,
  PoleEncountered,
  StepNotPositive,
  GridEmpty,
  TransportLeftDomain,
  QuadratureDiverged,
  DependentInitialConditions,
  NotIntegrable,
  UnknownName,
  BadParams,
  FixtureMissing,
};

inline const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it onto exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OpaqueNoDerivative: return "OpaqueNoDerivative";
    case ErrorKind::UnboundSymbol: return "UnboundSymbol";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotVertical: return "NotVertical";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::DependentBasis: return "DependentBasis";
    case ErrorKind::MissingDerivative: return "MissingDerivative";
    case ErrorKind::PoleEncountered: return "PoleEncountered";
    case ErrorKind::StepNotPositive: return "StepNotPositive";
    case ErrorKind::GridEmpty: return "GridEmpty";
    case ErrorKind::TransportLeftDomain: return "TransportLeftDomain";
    case ErrorKind::QuadratureDiverged: return "QuadratureDiverged";
    case ErrorKind::DependentInitialConditions: return "DependentInitialConditions";
    case ErrorKind::NotIntegrable: return "NotIntegrable";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::FixtureMissing: return "FixtureMissing";
  }
  return "Error";
}

}  // namespace liesym
