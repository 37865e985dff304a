#include "fno/problem_file.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fno {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& msg) {
  throw Error(ErrorKind::InvalidInput, where + ": " + msg);
}

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) bad(where, "unknown key \"" + item.key() + "\"");
  }
}

double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where, "expected a number");
  return v.get<double>();
}

std::string string_at(const json& obj, const char* key, std::string fallback,
                      const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) bad(where + "." + key, "expected a string");
  return obj[key].get<std::string>();
}

std::size_t count_at(const json& v, const std::string& where) {
  if (!v.is_number_unsigned()) bad(where, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::vector<double> numbers_at(const json& v, const std::string& where) {
  if (!v.is_array()) bad(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t q = 0; q < v.size(); ++q) out.push_back(number_at(v[q], where + "[" + std::to_string(q) + "]"));
  return out;
}

// A matrix or vector entry: crisp number or triangular triple.
FuzzyNCell entry_at(const json& v, const GridPtr& grid, const std::string& where) {
  if (v.is_number()) {
    const double c = v.get<double>();
    return make_crisp(std::span<const double>(&c, 1), grid);
  }
  const std::vector<double> triple = numbers_at(v, where);
  if (triple.size() != 3) bad(where, "triangular numbers are written [l, c, u]");
  try {
    return make_triangular(triple[0], triple[1], triple[2], grid);
  } catch (const Error& e) {
    throw Error(e.kind(), where + ": " + e.what());
  }
}

std::vector<ExprProgram> expressions_at(const json& v, std::size_t n, std::size_t m,
                                        const std::string& where) {
  if (!v.is_array() || v.size() != n) bad(where, "expected " + std::to_string(n) + " expression strings");
  std::vector<ExprProgram> out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    if (!v[i].is_string()) bad(at, "expected an expression string");
    try {
      out.push_back(ExprProgram::parse(v[i].get<std::string>(), m));
    } catch (const ParseError& e) {
      throw ParseError(e.kind(), e.position(), at + ": " + std::string(e.what()).substr(0, std::string(e.what()).rfind(" at position")));
    }
  }
  return out;
}

FuzzyFunction function_at(const json& v, const ProblemFile& pf, const std::string& where) {
  if (!v.is_object()) bad(where, "expected a function object");
  const std::string kind = string_at(v, "kind", "endpoints", where);
  if (kind == "endpoints") {
    allow_keys(v, where, {"kind", "lower", "upper"});
    if (!v.contains("lower") || !v.contains("upper")) bad(where, "needs \"lower\" and \"upper\"");
    return FuzzyFunction::from_expressions(
        pf.grid, pf.domain_dim, expressions_at(v["lower"], pf.cell_dim, pf.domain_dim, where + ".lower"),
        expressions_at(v["upper"], pf.cell_dim, pf.domain_dim, where + ".upper"), pf.domain);
  }
  if (kind == "quadratic") {
    allow_keys(v, where, {"kind", "A", "b"});
    if (pf.cell_dim != 1) bad(where, "quadratic functions need cell_dim 1");
    const std::size_t m = pf.domain_dim;
    if (!v.contains("A") || !v["A"].is_array() || v["A"].size() != m)
      bad(where + ".A", "expected " + std::to_string(m) + " rows");
    std::vector<std::vector<FuzzyNCell>> rows;
    for (std::size_t k = 0; k < m; ++k) {
      const json& row = v["A"][k];
      const std::string at = where + ".A[" + std::to_string(k) + "]";
      if (!row.is_array() || row.size() != m) bad(at, "expected " + std::to_string(m) + " entries");
      std::vector<FuzzyNCell> entries;
      for (std::size_t j = 0; j < m; ++j) entries.push_back(entry_at(row[j], pf.grid, at + "[" + std::to_string(j) + "]"));
      rows.push_back(std::move(entries));
    }
    std::vector<FuzzyNCell> b;
    if (v.contains("b")) {
      if (!v["b"].is_array() || v["b"].size() != m) bad(where + ".b", "expected " + std::to_string(m) + " entries");
      for (std::size_t j = 0; j < m; ++j) b.push_back(entry_at(v["b"][j], pf.grid, where + ".b[" + std::to_string(j) + "]"));
    } else {
      b.assign(m, make_zero(1, pf.grid));
    }
    FuzzyFunction q = fuzzy_quadratic(FuzzyMatrix(std::move(rows)), FuzzyVector(std::move(b)));
    if (pf.domain.empty()) return q;
    return FuzzyFunction(m, 1, pf.grid,
                         [q](std::span<const double> t, std::span<double> lo, std::span<double> hi) {
                           q.evaluate_raw(t, lo, hi);
                         },
                         intersect(q.domain(), pf.domain));
  }
  bad(where + ".kind", "unknown function kind \"" + kind + "\"");
}

void read_options(const json& v, ProblemFile& pf) {
  if (!v.is_object()) bad("options", "expected an object");
  allow_keys(v, "options",
             {"seed", "uniform_samples", "clustered_samples", "cluster_radius", "initial_step",
              "steps", "convergence_tolerance", "complementarity_tolerance", "slater_margin",
              "strict_feasibility", "lambda_grid", "dual_grid_points", "minimize_step",
              "certificate_radius", "max_iterations"});
  auto& o = pf.options;
  if (v.contains("seed")) {
    o.seed = count_at(v["seed"], "options.seed");
    o.samples.seed = o.seed;
  }
  if (v.contains("uniform_samples")) o.samples.uniform = count_at(v["uniform_samples"], "options.uniform_samples");
  if (v.contains("clustered_samples")) o.samples.clustered = count_at(v["clustered_samples"], "options.clustered_samples");
  if (v.contains("cluster_radius")) o.samples.cluster_radius = number_at(v["cluster_radius"], "options.cluster_radius");
  if (v.contains("initial_step")) o.derivative.initial_step = number_at(v["initial_step"], "options.initial_step");
  if (v.contains("steps")) o.derivative.steps = count_at(v["steps"], "options.steps");
  if (v.contains("convergence_tolerance"))
    o.derivative.tolerance = number_at(v["convergence_tolerance"], "options.convergence_tolerance");
  if (v.contains("complementarity_tolerance"))
    o.kkt.complementarity_tolerance = number_at(v["complementarity_tolerance"], "options.complementarity_tolerance");
  if (v.contains("slater_margin")) o.kkt.slater_margin = number_at(v["slater_margin"], "options.slater_margin");
  if (v.contains("strict_feasibility")) {
    if (!v["strict_feasibility"].is_boolean()) bad("options.strict_feasibility", "expected true or false");
    o.kkt.strict_feasibility = v["strict_feasibility"].get<bool>();
  }
  if (v.contains("lambda_grid")) {
    const json& g = v["lambda_grid"];
    if (!g.is_array() || g.size() != pf.constraint_count())
      bad("options.lambda_grid", "expected one value list per constraint");
    std::vector<std::vector<double>> grid;
    for (std::size_t j = 0; j < g.size(); ++j)
      grid.push_back(numbers_at(g[j], "options.lambda_grid[" + std::to_string(j) + "]"));
    o.lambda_grid = std::move(grid);
  }
  if (v.contains("dual_grid_points")) o.dual_grid_points = count_at(v["dual_grid_points"], "options.dual_grid_points");
  if (v.contains("minimize_step")) o.minimize_step = number_at(v["minimize_step"], "options.minimize_step");
  if (v.contains("certificate_radius")) o.certificate_radius = number_at(v["certificate_radius"], "options.certificate_radius");
  if (v.contains("max_iterations")) o.max_iterations = count_at(v["max_iterations"], "options.max_iterations");
}

}  // namespace

Problem ProblemFile::problem() const {
  Problem p{objective(), std::vector<FuzzyFunction>(functions.begin() + 1, functions.end()), domain};
  p.validate();
  return p;
}

const FuzzyFunction& ProblemFile::function(std::string_view name) const {
  if (name.empty() || name == "objective") return objective();
  if (name == "composite") {
    if (!composite) throw Error(ErrorKind::InvalidInput, "the problem has no composite function");
    return *composite;
  }
  if (name.size() >= 2 && name[0] == 'g') {
    std::size_t j = 0;
    const auto digits = name.substr(1);
    auto res = std::from_chars(digits.data(), digits.data() + digits.size(), j);
    if (res.ec == std::errc() && res.ptr == digits.data() + digits.size() && j >= 1 &&
        j <= constraint_count())
      return functions[j];
  }
  throw Error(ErrorKind::InvalidInput, "unknown function \"" + std::string(name) +
                                           "\" (use objective, g1..g" +
                                           std::to_string(constraint_count()) + " or composite)");
}

ProblemFile parse_problem(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(ErrorKind::ParseError, e.byte, "problem file is not valid JSON");
  }
  if (!doc.is_object()) bad("problem", "expected a JSON object");
  allow_keys(doc, "problem",
             {"schema", "grid_levels", "domain_dim", "cell_dim", "domain_box", "objective",
              "constraints", "composite", "options"});
  if (string_at(doc, "schema", "", "problem") != "fno/1") bad("schema", "expected \"fno/1\"");

  ProblemFile pf;
  const std::size_t levels = doc.contains("grid_levels") ? count_at(doc["grid_levels"], "grid_levels") : 101;
  if (levels < 2) bad("grid_levels", "need at least two levels");
  pf.grid = LevelGrid::uniform(levels);
  if (!doc.contains("domain_dim")) bad("domain_dim", "missing");
  pf.domain_dim = count_at(doc["domain_dim"], "domain_dim");
  if (pf.domain_dim == 0) bad("domain_dim", "must be at least 1");
  pf.cell_dim = doc.contains("cell_dim") ? count_at(doc["cell_dim"], "cell_dim") : 1;
  if (pf.cell_dim == 0) bad("cell_dim", "must be at least 1");

  if (doc.contains("domain_box")) {
    const json& b = doc["domain_box"];
    if (!b.is_array() || b.size() != pf.domain_dim)
      bad("domain_box", "expected " + std::to_string(pf.domain_dim) + " [lo, hi] pairs");
    std::vector<Interval> bounds;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::vector<double> pair = numbers_at(b[j], "domain_box[" + std::to_string(j) + "]");
      if (pair.size() != 2 || !(pair[0] <= pair[1]))
        bad("domain_box[" + std::to_string(j) + "]", "expected [lo, hi] with lo <= hi");
      bounds.push_back({pair[0], pair[1]});
    }
    pf.domain = DomainBox(std::move(bounds));
  }

  if (!doc.contains("objective")) bad("objective", "missing");
  pf.functions.push_back(function_at(doc["objective"], pf, "objective"));
  if (doc.contains("constraints")) {
    const json& cs = doc["constraints"];
    if (!cs.is_array()) bad("constraints", "expected an array");
    for (std::size_t j = 0; j < cs.size(); ++j)
      pf.functions.push_back(function_at(cs[j], pf, "constraints[" + std::to_string(j) + "]"));
  }
  if (doc.contains("composite")) pf.composite = function_at(doc["composite"], pf, "composite");
  if (doc.contains("options")) read_options(doc["options"], pf);
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open problem file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_problem(text.str());
}

}  // namespace fno
