#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fno/levelsets.hpp"

namespace fno {

enum class Status { Verified, Refuted, Inconclusive };

std::string_view to_string(Status status);

/// Evidence for a failed (or undecided) sampled check. For order checks the
/// violated inequality is `lhs >= rhs` (or `lhs <= rhs` for convexity) at
/// `violation`.
struct Witness {
  std::vector<double> point;
  std::vector<double> second_point;  // convexity checks: y
  double weight = 0.0;               // convexity checks: lambda
  std::optional<OrderWitness> violation;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string reason;
};

/// Outcome of a sample-based verification. Verified never means proved: it
/// means no sample out of `samples_used` contradicted the claim.
struct Certificate {
  Status status = Status::Verified;
  std::optional<Witness> witness;
  std::size_t samples_used = 0;
  std::string check;

  bool verified() const noexcept { return status == Status::Verified; }
  bool refuted() const noexcept { return status == Status::Refuted; }
};

}  // namespace fno
