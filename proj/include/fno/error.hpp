#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fno {

// Failure categories. The CLI maps each one onto an exit code, so adding a
// kind means touching exit_code_for() as well.
enum class ErrorKind {
  GridMismatch,
  DimensionMismatch,
  IndexOutOfRange,
  OrderViolation,
  MonotonicityViolation,
  NotRepresentable,
  InvalidLevelSets,
  InvariantViolation,
  ParseError,
  UnknownIdentifier,
  DomainViolation,
  NoConvergence,
  NotDifferentiable,
  InfeasiblePoint,
  NegativeMultiplier,
  EmptySampleSide,
  MaxIterations,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the expression parser; `position` is a 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t position, const std::string& what)
      : Error(kind, what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// True for input problems (bad files, bad arguments, illegal level sets
/// produced by user expressions); false for numerical failures.
bool is_input_error(ErrorKind kind);

}  // namespace fno
