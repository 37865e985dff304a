#include "fno/error.hpp"

namespace fno {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::OrderViolation: return "OrderViolation";
    case ErrorKind::MonotonicityViolation: return "MonotonicityViolation";
    case ErrorKind::NotRepresentable: return "NotRepresentable";
    case ErrorKind::InvalidLevelSets: return "InvalidLevelSets";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotDifferentiable: return "NotDifferentiable";
    case ErrorKind::InfeasiblePoint: return "InfeasiblePoint";
    case ErrorKind::NegativeMultiplier: return "NegativeMultiplier";
    case ErrorKind::EmptySampleSide: return "EmptySampleSide";
    case ErrorKind::MaxIterations: return "MaxIterations";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotRepresentable:
    case ErrorKind::NoConvergence:
    case ErrorKind::MonotonicityViolation:
    case ErrorKind::MaxIterations:
      return false;
    default:
      return true;
  }
}

}  // namespace fno
