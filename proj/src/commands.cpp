#include "fno/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "fno/subdiff.hpp"
#include "format.hpp"

namespace fno {

namespace {

Json point_json(std::span<const double> p) { return Json(std::vector<double>(p.begin(), p.end())); }

Json vector_json(const FuzzyVector& v) {
  Json out = Json::array();
  for (const auto& c : v.components()) out.push_back(to_json(c));
  return out;
}

std::string vector_csv(const FuzzyVector& v) {
  using detail::format_double;
  std::string out = "r,j,i,lo,hi\n";
  for (std::size_t j = 0; j < v.size(); ++j) {
    const FuzzyNCell& u = v[j];
    for (std::size_t i = 0; i < u.cells(); ++i) {
      for (std::size_t k = 0; k < u.levels(); ++k) {
        out += format_double((*u.grid())[k]) + ',' + std::to_string(j) + ',' + std::to_string(i) +
               ',' + format_double(u.lo(i, k)) + ',' + format_double(u.hi(i, k)) + '\n';
      }
    }
  }
  return out;
}

Json derivative_json(const DerivativeReport& d) {
  Json history = Json::array();
  for (const auto& s : d.step_history) history.push_back({{"h", s.h}, {"change", s.change}});
  return {{"side", to_string(d.side)},
          {"converged", d.converged},
          {"error_estimate", d.error_estimate},
          {"level_sets", to_json(d.value)},
          {"step_history", std::move(history)}};
}

Side parse_side(const std::string& s) {
  if (s == "right") return Side::Right;
  if (s == "left") return Side::Left;
  if (s == "two-sided" || s == "both") return Side::TwoSided;
  throw Error(ErrorKind::InvalidInput, "side must be right, left or two-sided");
}

// Parsed request plus everything a command handler needs.
class Context {
 public:
  Context(const ProblemFile& pf, const CommandRequest& req) : pf(pf), req(req) {
    seed = req.seed.value_or(pf.options.seed);
    sample_options = pf.options.samples;
    sample_options.seed = seed;
  }

  const FuzzyFunction& function() const { return pf.function(req.function); }

  std::span<const double> point(const std::vector<double>& p, const char* flag) const {
    if (p.empty()) throw Error(ErrorKind::InvalidInput, std::string("missing ") + flag);
    if (p.size() != pf.domain_dim) {
      throw Error(ErrorKind::DimensionMismatch, std::string(flag) + " needs " +
                                                    std::to_string(pf.domain_dim) + " coordinates");
    }
    return p;
  }

  std::span<const double> multipliers() const {
    if (req.lambda.size() != pf.constraint_count()) {
      throw Error(ErrorKind::DimensionMismatch, "--lambda needs " +
                                                    std::to_string(pf.constraint_count()) + " values");
    }
    return req.lambda;
  }

  std::vector<Point> samples(const DomainBox& box, std::span<const double> center) const {
    if (!box.is_finite()) {
      throw Error(ErrorKind::DomainViolation, "sampling needs a finite domain_box in the problem file");
    }
    return default_samples(box, center, sample_options);
  }

  Point center(const DomainBox& box) const {
    Point c(pf.domain_dim, 0.0);
    if (box.empty()) return c;
    for (std::size_t j = 0; j < c.size(); ++j) {
      const Interval b = box[j];
      if (std::isfinite(b.lo) && std::isfinite(b.hi)) c[j] = 0.5 * (b.lo + b.hi);
      else c[j] = std::clamp(0.0, b.lo, b.hi);
    }
    return c;
  }

  const ProblemFile& pf;
  const CommandRequest& req;
  std::uint64_t seed = 0;
  SampleOptions sample_options;
  CommandOutcome out;
  Json value;
  Json diagnostics = Json::object();
  std::optional<Certificate> certificate;

  void set_status(Status s) {
    out.status = std::string(to_string(s));
    out.exit_code = exit_code_for(s);
  }
  void warn(const std::string& w) { diagnostics["warnings"].push_back(w); }
};

void cmd_eval(Context& c) {
  const FuzzyNCell v = eval_function(c.function(), c.point(c.req.at, "--at"));
  c.value = {{"at", c.req.at}, {"level_sets", to_json(v)}};
  c.out.csv = to_csv(v);
}

void cmd_gdiff(Context& c) {
  const auto& f = c.function();
  const FuzzyNCell d =
      g_diff(eval_function(f, c.point(c.req.at, "--at")), eval_function(f, c.point(c.req.other, "--minus-at")));
  c.value = {{"at", c.req.at}, {"minus_at", c.req.other}, {"level_sets", to_json(d)}};
  c.out.csv = to_csv(d);
}

void cmd_metric(Context& c) {
  const auto& f = c.function();
  const FuzzyNCell u = eval_function(f, c.point(c.req.at, "--at"));
  const FuzzyNCell v = eval_function(f, c.point(c.req.other, "--other"));
  double best = 0.0;
  std::size_t level = 0;
  for (std::size_t k = 0; k < u.levels(); ++k) {
    const double d = box_distance(u.level_box(k), v.level_box(k));
    if (d > best) best = d, level = k;
  }
  c.value = {{"at", c.req.at}, {"other", c.req.other}, {"distance", distance(u, v)},
             {"attained_at_r", (*u.grid())[level]}};
}

void cmd_dderiv(Context& c) {
  const DerivativeReport d = directional_derivative(c.function(), c.point(c.req.at, "--at"),
                                                    c.point(c.req.dir, "--dir"),
                                                    parse_side(c.req.side), c.pf.options.derivative);
  c.value = derivative_json(d);
  c.out.csv = to_csv(d.value);
}

void cmd_grad(Context& c) {
  const auto& f = c.function();
  const auto at = c.point(c.req.at, "--at");
  std::vector<FuzzyNCell> parts;
  Json sides = Json::array();
  for (std::size_t j = 0; j < f.domain_dim(); ++j) {
    DerivativeReport d = partial_derivative(f, at, j, c.pf.options.derivative);
    sides.push_back(to_string(d.side));
    parts.push_back(std::move(d.value));
  }
  const FuzzyVector g(std::move(parts));
  c.value = {{"at", c.req.at}, {"components", vector_json(g)}};
  c.diagnostics["sides"] = std::move(sides);
  c.out.csv = vector_csv(g);
}

void cmd_convex(Context& c) {
  const auto& f = c.function();
  const std::vector<Point> z = c.samples(f.domain(), c.center(f.domain()));
  constexpr double kWeights[] = {0.25, 0.5, 0.75};
  std::vector<ConvexSample> pairs;
  for (std::size_t q = 0; q < z.size(); ++q) {
    pairs.push_back({z[q], z[(q + 1) % z.size()], kWeights[q % 3]});
  }
  const Certificate fuzzy = convexity_certificate(f, pairs);
  const Certificate endpoints = endpoint_convexity_certificate(f, pairs);
  c.certificate = fuzzy.refuted() || !endpoints.refuted() ? fuzzy : endpoints;
  c.diagnostics["endpoint_route"] = to_json(endpoints);
  c.diagnostics["order_route"] = to_json(fuzzy);
  c.set_status(fuzzy.refuted() || endpoints.refuted() ? Status::Refuted : Status::Verified);
}

void cmd_subgrad(Context& c) {
  const auto& f = c.function();
  const auto at = c.point(c.req.at, "--at");
  if (c.req.candidate.empty()) throw Error(ErrorKind::InvalidInput, "missing --candidate");
  const FuzzyVector v = parse_candidate(c.req.candidate, f.grid(), f.domain_dim(), f.cell_dim());
  const Certificate cert = verify_subgradient(f, at, v, c.samples(f.domain(), at));
  c.value = {{"at", c.req.at}, {"candidate", vector_json(v)}};
  c.certificate = cert;
  c.set_status(cert.status);
}

void cmd_subdiff1d(Context& c) {
  const auto& f = c.function();
  const auto at = c.point(c.req.at, "--at");
  const SubdiffBox1D box = subdiff_box_1d(f, at[0], c.samples(f.domain(), at), true);
  Json cells = Json::array();
  const std::size_t L = box.grid->size();
  for (std::size_t i = 0; i < box.cells; ++i) {
    auto slice = [&](const std::vector<double>& v) {
      return std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(i * L),
                                 v.begin() + static_cast<std::ptrdiff_t>((i + 1) * L));
    };
    cells.push_back({{"vlo_min", slice(box.vlo_min)},
                     {"vlo_max", slice(box.vlo_max)},
                     {"vhi_min", slice(box.vhi_min)},
                     {"vhi_max", slice(box.vhi_max)}});
  }
  const auto levels = box.grid->levels();
  c.value = {{"at", c.req.at},
             {"nonempty", box.nonempty},
             {"has_legal_member", box.has_legal_member},
             {"half_bounded", box.half_bounded},
             {"samples_used", box.samples_used},
             {"r", std::vector<double>(levels.begin(), levels.end())},
             {"cells", std::move(cells)}};
  if (box.half_bounded) c.warn("samples lie on one side of t only; the missing bounds are infinite");
  if (!box.nonempty) c.warn("the box is empty at some level");
  else if (!box.has_legal_member) c.warn("no legal fuzzy number fits inside the bounds");
  c.out.csv = to_csv(box);
}

void cmd_minimize(Context& c) {
  const auto& f = c.function();
  const Point start = c.req.from.empty() ? c.center(f.domain()) : Point(c.req.from);
  MinimizeOptions opts;
  opts.initial_step = c.pf.options.minimize_step;
  opts.certificate_radius = c.pf.options.certificate_radius;
  opts.max_iterations = c.pf.options.max_iterations;
  opts.samples = c.sample_options;
  const MinimizeResult r = minimize_scalarized(f, c.point(start, "--from"), opts);
  const FuzzyNCell best = eval_function(f, r.x_best);
  c.value = {{"from", start},
             {"x_best", r.x_best},
             {"scalarization", r.scalar},
             {"evaluations", r.iterations},
             {"level_sets", to_json(best)}};
  c.certificate = r.certificate.certificate;
  c.diagnostics["order_branch"] = to_json(r.certificate.order_branch);
  c.diagnostics["subgradient_branch"] = to_json(r.certificate.subgradient_branch);
  c.out.csv = to_csv(best);
  c.set_status(r.certificate.certificate.status);
}

Json kkt_json(const KKTReport& r) {
  Json feasible = Json::array();
  for (bool b : r.feasible) feasible.push_back(b);
  Json out = {{"multipliers", r.multipliers},
              {"complementarity", r.complementarity},
              {"complementarity_holds", r.complementarity_holds},
              {"stationarity", to_string(r.stationarity.status)},
              {"feasible", std::move(feasible)}};
  out["slater_witness"] = r.slater_witness ? point_json(*r.slater_witness) : Json(nullptr);
  return out;
}

void kkt_warnings(Context& c, const KKTReport& r) {
  for (std::size_t j = 0; j < r.feasible.size(); ++j) {
    if (!r.feasible[j]) c.warn("constraint g" + std::to_string(j + 1) + " is not <= 0 at the point");
  }
  if (!r.slater_witness && !r.feasible.empty()) c.warn("no strictly feasible sample found");
}

void cmd_kkt_verify(Context& c) {
  const Problem p = c.pf.problem();
  const auto at = c.point(c.req.at, "--at");
  const KKTReport r = kkt_verify(p, at, c.multipliers(), c.samples(p.domain, at), c.pf.options.kkt);
  c.value = kkt_json(r);
  c.certificate = r.stationarity;
  kkt_warnings(c, r);
  c.set_status(r.verified() ? Status::Verified
               : r.stationarity.status == Status::Inconclusive && r.complementarity_holds
                   ? Status::Inconclusive
                   : Status::Refuted);
}

void cmd_kkt_search(Context& c) {
  const Problem p = c.pf.problem();
  const auto at = c.point(c.req.at, "--at");
  const auto grid = c.pf.options.lambda_grid.value_or(default_lambda_grid(p.constraints.size()));
  const KKTSearchResult r = kkt_search(p, at, grid, c.samples(p.domain, at), c.pf.options.kkt);
  c.value = kkt_json(r.report);
  c.value["lambda"] = r.lambda;
  c.value["candidates_tried"] = r.candidates_tried;
  c.certificate = r.report.stationarity;
  kkt_warnings(c, r.report);
  if (r.found) {
    c.set_status(Status::Verified);
  } else {
    c.out.status = "NotFound";
    c.out.exit_code = 1;
  }
}

void cmd_dual(Context& c) {
  const Problem p = c.pf.problem();
  const auto lambda = c.multipliers();
  if (!p.domain.is_finite()) {
    throw Error(ErrorKind::DomainViolation, "sampling needs a finite domain_box in the problem file");
  }
  const DualResult d = dual_eval(p, lambda, grid_samples(p.domain, c.pf.options.dual_grid_points));
  c.value = {{"lambda", c.req.lambda},
             {"x_min", d.x_min},
             {"scalarization", d.scalar},
             {"scalarized", d.scalarized},
             {"level_sets", to_json(d.value)}};
  c.diagnostics["grid_points_per_dim"] = c.pf.options.dual_grid_points;
  c.out.csv = to_csv(d.value);
}

void cmd_composite(Context& c) {
  const FuzzyFunction& f = c.pf.objective();
  const bool own = c.pf.composite.has_value();
  if (!own && c.pf.constraint_count() == 0) {
    throw Error(ErrorKind::InvalidInput, "composite-check needs a \"composite\" function or a constraint");
  }
  const FuzzyFunction& g = own ? *c.pf.composite : c.pf.function("g1");
  const auto at = c.point(c.req.at, "--at");
  const CompositeReport r =
      composite_check(f, g, at, c.samples(g.domain(), at), c.pf.options.derivative);
  c.value = {{"at", c.req.at}, {"g", own ? "composite" : "g1"}, {"candidate", vector_json(r.candidate)}};
  c.certificate = r.certificate;
  c.diagnostics["g_convexity"] = to_json(r.convexity);
  if (r.convexity.refuted()) c.warn("G failed the sampled convexity check");
  c.set_status(r.certificate.status);
}

using Handler = void (*)(Context&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"eval", cmd_eval},
      {"gdiff", cmd_gdiff},
      {"metric", cmd_metric},
      {"dderiv", cmd_dderiv},
      {"grad", cmd_grad},
      {"convex-check", cmd_convex},
      {"subgrad-verify", cmd_subgrad},
      {"subdiff1d", cmd_subdiff1d},
      {"minimize", cmd_minimize},
      {"kkt-verify", cmd_kkt_verify},
      {"kkt-search", cmd_kkt_search},
      {"dual", cmd_dual},
      {"composite-check", cmd_composite},
  };
  return table;
}

Json base_report(const std::string& command, const std::string& status) {
  return {{"schema", "fno/1"}, {"command", command}, {"status", status}};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "eval",       "gdiff",      "metric",     "dderiv",     "grad",
      "convex-check", "subgrad-verify", "subdiff1d", "minimize", "kkt-verify",
      "kkt-search", "dual",       "composite-check"};
  return names;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotDifferentiable: return 1;
    case ErrorKind::NoConvergence:
    case ErrorKind::NotRepresentable:
    case ErrorKind::MonotonicityViolation:
    case ErrorKind::MaxIterations: return 3;
    default: return 2;
  }
}

int exit_code_for(Status status) {
  switch (status) {
    case Status::Verified: return 0;
    case Status::Refuted: return 1;
    case Status::Inconclusive: return 3;
  }
  return 3;
}

Json to_json(const FuzzyNCell& u) {
  Json lower = Json::array(), upper = Json::array();
  for (std::size_t i = 0; i < u.cells(); ++i) {
    const auto lo = u.lower(i);
    const auto hi = u.upper(i);
    lower.push_back(std::vector<double>(lo.begin(), lo.end()));
    upper.push_back(std::vector<double>(hi.begin(), hi.end()));
  }
  const auto levels = u.grid()->levels();
  return {{"cells", u.cells()},
          {"r", std::vector<double>(levels.begin(), levels.end())},
          {"lower", std::move(lower)},
          {"upper", std::move(upper)}};
}

Json to_json(const Certificate& c) {
  Json out = {{"status", to_string(c.status)}, {"check", c.check}, {"samples_used", c.samples_used}};
  if (c.witness) {
    const Witness& w = *c.witness;
    Json wj = {{"point", w.point}};
    if (!w.second_point.empty()) {
      wj["second_point"] = w.second_point;
      wj["weight"] = w.weight;
    }
    if (w.violation) {
      wj["cell"] = w.violation->cell;
      wj["level"] = w.violation->level;
      wj["side"] = to_string(w.violation->side);
      wj["lhs"] = w.lhs;
      wj["rhs"] = w.rhs;
    }
    wj["reason"] = w.reason;
    out["witness"] = std::move(wj);
  }
  return out;
}

FuzzyVector parse_candidate(const std::string& text, const GridPtr& grid, std::size_t m,
                            std::size_t n) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(ErrorKind::ParseError, e.byte, "candidate is not valid JSON");
  }
  if (!doc.is_array() || doc.size() != m) {
    throw Error(ErrorKind::DimensionMismatch, "candidate needs " + std::to_string(m) + " components");
  }
  std::vector<FuzzyNCell> parts;
  const std::size_t L = grid->size();
  for (std::size_t j = 0; j < m; ++j) {
    const Json& e = doc[j];
    const std::string where = "candidate[" + std::to_string(j) + "]";
    auto need_one_cell = [&] {
      if (n != 1) throw Error(ErrorKind::DimensionMismatch, where + ": numbers and triples need cell_dim 1");
    };
    if (e.is_number()) {
      need_one_cell();
      const double c = e.get<double>();
      parts.push_back(make_crisp(std::span<const double>(&c, 1), grid));
    } else if (e.is_array()) {
      need_one_cell();
      if (e.size() != 3 || !std::all_of(e.begin(), e.end(), [](const Json& x) { return x.is_number(); }))
        throw Error(ErrorKind::InvalidInput, where + ": triangular numbers are written [l, c, u]");
      parts.push_back(make_triangular(e[0].get<double>(), e[1].get<double>(), e[2].get<double>(), grid));
    } else if (e.is_object() && e.contains("crisp")) {
      const Json& p = e["crisp"];
      if (!p.is_array() || p.size() != n) throw Error(ErrorKind::DimensionMismatch, where + ": need " + std::to_string(n) + " values");
      std::vector<double> pt;
      for (const auto& x : p) {
        if (!x.is_number()) throw Error(ErrorKind::InvalidInput, where + ": expected numbers");
        pt.push_back(x.get<double>());
      }
      parts.push_back(make_crisp(pt, grid));
    } else if (e.is_object() && e.contains("lower") && e.contains("upper")) {
      std::vector<double> lo(n * L), hi(n * L);
      for (const char* key : {"lower", "upper"}) {
        const Json& list = e[key];
        if (!list.is_array() || list.size() != n)
          throw Error(ErrorKind::DimensionMismatch, where + "." + key + ": need " + std::to_string(n) + " expressions");
        for (std::size_t i = 0; i < n; ++i) {
          if (!list[i].is_string()) throw Error(ErrorKind::InvalidInput, where + "." + key + ": expected strings");
          const ExprProgram prog = ExprProgram::parse(list[i].get<std::string>(), 0);
          auto& dest = key[0] == 'l' ? lo : hi;
          for (std::size_t k = 0; k < L; ++k) dest[i * L + k] = prog.evaluate({}, (*grid)[k]);
        }
      }
      if (auto problem = check_level_sets(*grid, n, lo, hi)) {
        throw Error(ErrorKind::InvalidLevelSets, where + ": " + *problem);
      }
      parts.push_back(FuzzyNCell::from_endpoints(grid, n, std::move(lo), std::move(hi)));
    } else {
      throw Error(ErrorKind::InvalidInput, where + ": unsupported candidate entry");
    }
  }
  return FuzzyVector(std::move(parts));
}

CommandOutcome error_outcome(const std::string& command, const Error& error) {
  CommandOutcome out;
  out.status = "error";
  out.exit_code = exit_code_for(error.kind());
  out.report = base_report(command, out.status);
  out.report["error"] = {{"kind", to_string(error.kind())}, {"message", error.what()}};
  out.report["diagnostics"] = Json::object();
  return out;
}

CommandOutcome run_command(const ProblemFile& problem, const CommandRequest& request) {
  const auto& table = handlers();
  const auto it = table.find(request.command);
  if (it == table.end()) {
    return error_outcome(request.command,
                         Error(ErrorKind::InvalidInput, "unknown command \"" + request.command + "\""));
  }
  Context c(problem, request);
  c.out.status = "ok";
  try {
    it->second(c);
  } catch (const NotDifferentiableError& e) {
    CommandOutcome out;
    out.status = "NotDifferentiable";
    out.exit_code = 1;
    out.report = base_report(request.command, out.status);
    out.report["diagnostics"] = {{"message", e.what()},
                                 {"coordinate", e.coordinate() < problem.domain_dim
                                                    ? Json(e.coordinate() + 1)
                                                    : Json(nullptr)},
                                 {"gap", e.gap()},
                                 {"right", derivative_json(e.right())},
                                 {"left", derivative_json(e.left())}};
    out.report["seed"] = c.seed;
    return out;
  } catch (const Error& e) {
    CommandOutcome out = error_outcome(request.command, e);
    out.report["seed"] = c.seed;
    return out;
  }
  c.out.report = base_report(request.command, c.out.status);
  if (!c.value.is_null()) c.out.report["value"] = std::move(c.value);
  if (c.certificate) c.out.report["certificate"] = to_json(*c.certificate);
  c.out.report["diagnostics"] = std::move(c.diagnostics);
  c.out.report["seed"] = c.seed;
  return std::move(c.out);
}

}  // namespace fno
