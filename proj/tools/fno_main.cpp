// fno: command-line front end. Usage: fno <command> <problem.json> [flags]

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fno/fno.h"

namespace {

struct Args {
  std::string problem;
  std::string function;
  std::string at, other, dir, lambda, from;
  std::string side = "right";
  std::string candidate;
  std::string csv;
  std::optional<std::uint64_t> seed;
};

struct ArgError {
  std::string message;
};

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(start, end - start);
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    item = first == std::string::npos ? std::string() : item.substr(first, last - first + 1);
    double v = 0.0;
    auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size()) {
      throw ArgError{std::string(flag) + ": \"" + item + "\" is not a number"};
    }
    out.push_back(v);
    start = end + 1;
  }
  return out;
}

int print_arg_error(const std::string& command, const std::string& kind, const std::string& message) {
  nlohmann::ordered_json doc = {{"schema", "fno/1"},
                                {"command", command},
                                {"status", "error"},
                                {"error", {{"kind", kind}, {"message", message}}},
                                {"diagnostics", nlohmann::ordered_json::object()}};
  std::cout << doc.dump(2) << '\n';
  return FNO_INPUT_ERROR;
}

int emit(fno_report* report, const std::string& csv_path) {
  const int code = fno_report_code(report);
  const char* csv = fno_report_csv(report);
  if (!csv_path.empty() && csv && code != FNO_INPUT_ERROR && code != FNO_NUMERICAL_ERROR) {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out || !(out << csv)) {
      fno_report_free(report);
      return print_arg_error("", "InvalidInput", "cannot write CSV to " + csv_path);
    }
  }
  std::cout << fno_report_json(report) << '\n';
  fno_report_free(report);
  return code;
}

int run(const std::string& command, const Args& args) {
  std::vector<double> at, other, dir, lambda, from;
  try {
    at = parse_list(args.at, "--at");
    other = parse_list(args.other, command == "gdiff" ? "--minus-at" : "--other");
    dir = parse_list(args.dir, "--dir");
    lambda = parse_list(args.lambda, "--lambda");
    from = parse_list(args.from, "--from");
  } catch (const ArgError& e) {
    return print_arg_error(command, "ParseError", e.message);
  }

  fno_problem* problem = nullptr;
  if (fno_problem_load_file(args.problem.c_str(), &problem) != FNO_OK) {
    fno_report* report = nullptr;
    if (fno_error_report(command.c_str(), &report) == FNO_INTERNAL_ERROR) {
      std::cerr << "fno: " << fno_last_error() << '\n';
      return FNO_INTERNAL_ERROR;
    }
    return emit(report, "");
  }

  fno_request req;
  fno_request_init(&req);
  req.command = command.c_str();
  req.function = args.function.empty() ? nullptr : args.function.c_str();
  req.at = {at.data(), at.size()};
  req.other = {other.data(), other.size()};
  req.dir = {dir.data(), dir.size()};
  req.lambda = {lambda.data(), lambda.size()};
  req.from = {from.data(), from.size()};
  req.side = args.side.c_str();
  req.candidate = args.candidate.empty() ? nullptr : args.candidate.c_str();
  if (args.seed) {
    req.has_seed = 1;
    req.seed = *args.seed;
  }
  fno_report* report = nullptr;
  const fno_code code = fno_run(problem, &req, &report);
  fno_problem_free(problem);
  if (!report) {
    std::cerr << "fno: " << fno_last_error() << '\n';
    return code;
  }
  return emit(report, args.csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calculus and optimality checks for fuzzy n-cell numbers", "fno"};
  app.require_subcommand(1);
  Args args;

  struct Command {
    const char* name;
    const char* help;
    std::vector<const char*> flags;
  };
  const std::vector<Command> specs = {
      {"eval", "evaluate F at a point", {"at"}},
      {"gdiff", "g-difference F(at) - F(minus-at)", {"at", "minus-at"}},
      {"metric", "D_L distance between F(at) and F(other)", {"at", "other"}},
      {"dderiv", "directional derivative F'(at; dir)", {"at", "dir", "side"}},
      {"grad", "gradient of F at a point", {"at"}},
      {"convex-check", "sampled convexity check of F", {}},
      {"subgrad-verify", "check a candidate subgradient", {"at", "candidate"}},
      {"subdiff1d", "subdifferential bounds of a one-dimensional F", {"at"}},
      {"minimize", "minimize the mean-endpoint scalarization and certify", {"from"}},
      {"kkt-verify", "check KKT conditions for given multipliers", {"at", "lambda"}},
      {"kkt-search", "search KKT multipliers on a grid", {"at"}},
      {"dual", "scalarized Lagrangian dual value", {"lambda"}},
      {"composite-check", "check -grad F(x*) in dG(x*)", {"at"}},
  };

  for (const auto& spec : specs) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.help);
    sub->add_option("problem", args.problem, "problem file (schema fno/1)")->required();
    sub->add_option("--function", args.function, "objective (default), g1..gk or composite");
    sub->add_option("--seed", args.seed, "sample seed (overrides the file)");
    sub->add_option("--csv", args.csv, "also write level-set rows to this path");
    for (const std::string flag : spec.flags) {
      if (flag == "at") sub->add_option("--at", args.at, "point, comma separated")->required();
      if (flag == "minus-at") sub->add_option("--minus-at", args.other, "subtracted point")->required();
      if (flag == "other") sub->add_option("--other", args.other, "second point")->required();
      if (flag == "dir") sub->add_option("--dir", args.dir, "direction, comma separated")->required();
      if (flag == "side") sub->add_option("--side", args.side, "right, left or two-sided");
      if (flag == "candidate") sub->add_option("--candidate", args.candidate, "JSON array, one entry per coordinate")->required();
      if (flag == "lambda") sub->add_option("--lambda", args.lambda, "multipliers, comma separated")->required();
      if (flag == "from") sub->add_option("--from", args.from, "start point (default: domain center)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    const auto subs = app.get_subcommands();
    return print_arg_error(subs.empty() ? "" : subs.front()->get_name(), "InvalidInput", e.what());
  }
  return run(app.get_subcommands().front()->get_name(), args);
}
