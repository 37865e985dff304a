#pragma once

// Problem files, schema "fno/1". Example:
//
//   {
//     "schema": "fno/1",
//     "grid_levels": 101,
//     "domain_dim": 1,
//     "cell_dim": 1,
//     "domain_box": [[-2, 2]],
//     "objective": {"kind": "endpoints", "lower": ["t^2 - 1 + r"], "upper": ["t^2 + 1 - r"]},
//     "constraints": [
//       {"kind": "endpoints", "lower": ["-t - 1 + r"], "upper": ["-t + 1 - r"]}
//     ],
//     "options": {"seed": 0}
//   }
//
// A quadratic objective is {"kind": "quadratic", "A": [[e, e], [e, e]],
// "b": [e, e]} where each entry e is a number (crisp) or a triangular triple
// [l, c, u]; its domain is additionally cut to x >= 0. The optional
// "composite" function is the G of the composite check.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fno/calculus.hpp"
#include "fno/funcspace.hpp"
#include "fno/optimize.hpp"
#include "fno/sampling.hpp"

namespace fno {

struct ProblemOptions {
  std::uint64_t seed = 0;
  SampleOptions samples;
  DerivativeOptions derivative;
  KKTOptions kkt;
  std::optional<std::vector<std::vector<double>>> lambda_grid;
  std::size_t dual_grid_points = 41;
  double minimize_step = 1.0;
  double certificate_radius = 1.0;
  std::size_t max_iterations = 100000;
};

struct ProblemFile {
  GridPtr grid;
  std::size_t domain_dim = 0;
  std::size_t cell_dim = 0;
  DomainBox domain;
  std::vector<FuzzyFunction> functions;  // objective first, then constraints
  std::optional<FuzzyFunction> composite;
  ProblemOptions options;

  const FuzzyFunction& objective() const { return functions.front(); }
  std::size_t constraint_count() const noexcept { return functions.size() - 1; }
  Problem problem() const;
  /// "objective", "g1".."gk" or "composite".
  const FuzzyFunction& function(std::string_view name) const;
};

/// Throws ParseError (malformed JSON or expressions), UnknownIdentifier, or
/// InvalidInput / DimensionMismatch / InvariantViolation for schema problems.
ProblemFile parse_problem(std::string_view json_text);
ProblemFile load_problem(const std::string& path);

}  // namespace fno
