#pragma once

// Command layer shared by the C API and the command-line tool. Every command
// produces one JSON report
//   {"schema", "command", "status", "value"?, "certificate"?, "diagnostics", "seed"}
// and optionally CSV text. Status and exit code:
//   ok, Verified                          -> 0
//   Refuted, NotFound, NotDifferentiable  -> 1
//   error (input or parse problem)        -> 2
//   error (numerical failure), Inconclusive -> 3

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fno/certificate.hpp"
#include "fno/problem_file.hpp"

namespace fno {

using Json = nlohmann::ordered_json;

struct CommandRequest {
  std::string command;
  std::string function = "objective";
  std::vector<double> at;
  std::vector<double> other;  // gdiff --minus-at, metric --other
  std::vector<double> dir;
  std::vector<double> lambda;
  std::vector<double> from;   // minimize start; empty = domain center
  std::string side = "right";
  std::string candidate;      // subgrad-verify, JSON text
  std::optional<std::uint64_t> seed;
};

struct CommandOutcome {
  int exit_code = 0;
  std::string status;
  Json report;
  std::optional<std::string> csv;
};

/// Names accepted by run_command, in help order.
const std::vector<std::string>& command_names();

int exit_code_for(ErrorKind kind);
int exit_code_for(Status status);

/// Never throws for library errors: they become an error report.
CommandOutcome run_command(const ProblemFile& problem, const CommandRequest& request);

/// Report for a failure that happened before a command could run (for
/// example while loading the problem file).
CommandOutcome error_outcome(const std::string& command, const Error& error);

Json to_json(const FuzzyNCell& u);
Json to_json(const Certificate& c);

/// Candidate subgradient: a JSON array with one entry per coordinate, each a
/// number (crisp, n = 1), a triple [l, c, u] (n = 1), {"crisp": [n numbers]}
/// or {"lower": [n expressions in r], "upper": [...]}.
FuzzyVector parse_candidate(const std::string& text, const GridPtr& grid, std::size_t m,
                            std::size_t n);

}  // namespace fno
