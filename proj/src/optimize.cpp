#include "fno/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fno/subdiff.hpp"

namespace fno {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_multipliers(const Problem& p, std::span<const double> lambda) {
  if (lambda.size() != p.constraints.size()) {
    throw Error(ErrorKind::DimensionMismatch, "need one multiplier per constraint (" +
                                                  std::to_string(p.constraints.size()) + ")");
  }
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    if (!(lambda[j] >= 0.0)) {
      throw Error(ErrorKind::NegativeMultiplier, "multiplier " + std::to_string(j + 1) + " is negative");
    }
  }
}

bool strictly_negative(const FuzzyNCell& u, double margin) {
  for (double v : u.lower_data()) if (v > -margin) return false;
  for (double v : u.upper_data()) if (v > -margin) return false;
  return true;
}

// Order comparison against a fixed value, reported like a subgradient check.
Certificate order_branch(const FuzzyFunction& f, const FuzzyNCell& base,
                         std::span<const Point> samples) {
  Certificate cert;
  cert.check = "F(x) >= F(x0)";
  for (const auto& x : samples) {
    const FuzzyNCell fx = eval_function(f, x);
    ++cert.samples_used;
    const OrderResult ord = order(fx, base);
    if (!ord.ge()) {
      const OrderWitness& at = *ord.not_ge;
      const bool lower = at.side == Endpoint::Lower;
      Witness w;
      w.point = x;
      w.violation = at;
      w.lhs = lower ? fx.lo(at.cell, at.level) : fx.hi(at.cell, at.level);
      w.rhs = lower ? base.lo(at.cell, at.level) : base.hi(at.cell, at.level);
      w.reason = "F(x) is not >= F(x0)";
      cert.status = Status::Refuted;
      cert.witness = std::move(w);
      return cert;
    }
  }
  return cert;
}

}  // namespace

void Problem::validate() const {
  if (!domain.empty() && domain.size() != objective.domain_dim())
    throw Error(ErrorKind::DimensionMismatch, "domain box dimension differs from the objective");
  for (const auto& g : constraints) {
    if (g.grid() != objective.grid()) throw Error(ErrorKind::GridMismatch, "constraint uses a different grid");
    if (g.domain_dim() != objective.domain_dim() || g.cell_dim() != objective.cell_dim())
      throw Error(ErrorKind::DimensionMismatch, "constraint differs from the objective in m or n");
  }
}

double mean_endpoints(const FuzzyNCell& u) {
  double sum = 0.0;
  for (double v : u.lower_data()) sum += v;
  for (double v : u.upper_data()) sum += v;
  return sum / static_cast<double>(2 * u.lower_data().size());
}

Scalarization level_weighted(std::vector<double> weights) {
  return [weights = std::move(weights)](const FuzzyNCell& u) {
    if (weights.size() != u.levels())
      throw Error(ErrorKind::DimensionMismatch, "need one scalarization weight per level");
    double sum = 0.0, total = 0.0;
    for (std::size_t i = 0; i < u.cells(); ++i) {
      for (std::size_t k = 0; k < u.levels(); ++k) {
        sum += weights[k] * 0.5 * (u.lo(i, k) + u.hi(i, k));
        total += weights[k];
      }
    }
    if (total == 0.0) throw Error(ErrorKind::InvalidInput, "scalarization weights sum to zero");
    return sum / total;
  };
}

GlobalMinReport verify_global_min(const FuzzyFunction& f, std::span<const double> x0,
                                  std::span<const Point> samples) {
  const FuzzyNCell base = eval_function(f, x0);
  GlobalMinReport out;
  out.order_branch = order_branch(f, base, samples);
  out.subgradient_branch =
      verify_subgradient(f, x0, FuzzyVector::zeros(f.domain_dim(), f.cell_dim(), f.grid()), samples);
  out.certificate.check = "x0 minimizes F over the samples";
  out.certificate.samples_used = samples.size();
  for (const Certificate* branch : {&out.order_branch, &out.subgradient_branch}) {
    if (branch->refuted()) {
      out.certificate.status = Status::Refuted;
      out.certificate.witness = branch->witness;
      return out;
    }
  }
  for (const Certificate* branch : {&out.order_branch, &out.subgradient_branch}) {
    if (branch->status == Status::Inconclusive) {
      out.certificate.status = Status::Inconclusive;
      out.certificate.witness = branch->witness;
      return out;
    }
  }
  return out;
}

bool KKTReport::feasible_point() const noexcept {
  return std::all_of(feasible.begin(), feasible.end(), [](bool b) { return b; });
}

FuzzyFunction aggregate(const Problem& p, std::span<const double> lambda) {
  require_multipliers(p, lambda);
  FuzzyFunction h = p.objective;
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    if (lambda[j] != 0.0) h = add(h, scale(lambda[j], p.constraints[j]));
  }
  return h;
}

KKTReport kkt_verify(const Problem& p, std::span<const double> xstar,
                     std::span<const double> lambda, std::span<const Point> samples,
                     const KKTOptions& options) {
  p.validate();
  require_multipliers(p, lambda);
  KKTReport report;
  report.multipliers.assign(lambda.begin(), lambda.end());
  const FuzzyNCell zero = make_zero(p.objective.cell_dim(), p.objective.grid());
  for (std::size_t j = 0; j < p.constraints.size(); ++j) {
    const FuzzyNCell gj = eval_function(p.constraints[j], xstar);
    const bool ok = order(gj, zero).le();
    if (!ok && options.strict_feasibility) {
      throw Error(ErrorKind::InfeasiblePoint, "constraint " + std::to_string(j + 1) +
                                                  " is not <= 0 at the point");
    }
    report.feasible.push_back(ok);
    const double dist = distance(scale(lambda[j], gj), zero);
    report.complementarity.push_back(dist);
    if (!(dist <= options.complementarity_tolerance)) report.complementarity_holds = false;
  }
  report.stationarity = verify_subgradient(
      aggregate(p, lambda), xstar,
      FuzzyVector::zeros(p.domain_dim(), p.objective.cell_dim(), p.objective.grid()), samples);
  report.stationarity.check = "0 in d(F + sum l_j G_j)(x*)";
  if (!p.constraints.empty()) {
    for (const auto& z : samples) {
      bool strict = true;
      for (const auto& g : p.constraints) {
        if (!strictly_negative(eval_function(g, z), options.slater_margin)) {
          strict = false;
          break;
        }
      }
      if (strict) {
        report.slater_witness = z;
        break;
      }
    }
  }
  return report;
}

std::vector<std::vector<double>> default_lambda_grid(std::size_t k) {
  std::vector<double> values;
  for (int q = 0; q <= 16; ++q) values.push_back(0.25 * q);
  return std::vector<std::vector<double>>(k, values);
}

KKTSearchResult kkt_search(const Problem& p, std::span<const double> xstar,
                           const std::vector<std::vector<double>>& lambda_grid,
                           std::span<const Point> samples, const KKTOptions& options) {
  const std::size_t k = p.constraints.size();
  if (lambda_grid.size() != k) {
    throw Error(ErrorKind::DimensionMismatch, "multiplier grid needs one value list per constraint");
  }
  for (const auto& values : lambda_grid) {
    if (values.empty()) throw Error(ErrorKind::InvalidInput, "multiplier grid has an empty value list");
  }

  KKTSearchResult result;
  double best_score = kInf;
  std::vector<std::size_t> idx(k, 0);
  std::vector<double> lambda(k);
  for (;;) {
    for (std::size_t j = 0; j < k; ++j) lambda[j] = lambda_grid[j][idx[j]];
    KKTReport report = kkt_verify(p, xstar, lambda, samples, options);
    ++result.candidates_tried;
    if (report.verified()) {
      result.found = true;
      result.lambda = lambda;
      result.report = std::move(report);
      return result;
    }
    double score = report.stationarity.verified() ? 0.0 : 1.0;
    double worst = 0.0;
    for (double c : report.complementarity) worst = std::max(worst, c);
    score += worst;
    if (score < best_score) {
      best_score = score;
      result.lambda = lambda;
      result.report = std::move(report);
    }
    std::size_t j = k;
    while (j > 0) {
      --j;
      if (++idx[j] < lambda_grid[j].size()) break;
      idx[j] = 0;
      if (j == 0) return result;
    }
    if (k == 0) return result;
  }
}

FuzzyNCell lagrangian(const Problem& p, std::span<const double> x, std::span<const double> lambda) {
  require_multipliers(p, lambda);
  FuzzyNCell value = eval_function(p.objective, x);
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    value = add(value, scale(lambda[j], eval_function(p.constraints[j], x)));
  }
  return value;
}

DualResult dual_eval(const Problem& p, std::span<const double> lambda,
                     std::span<const Point> samples, const Scalarization& s) {
  require_multipliers(p, lambda);
  if (samples.empty()) throw Error(ErrorKind::InvalidInput, "dual evaluation needs at least one sample");
  std::optional<DualResult> best;
  for (const auto& x : samples) {
    FuzzyNCell value = lagrangian(p, x, lambda);
    const double v = s(value);
    if (!best || v < best->scalar) best = DualResult{x, std::move(value), v, true};
  }
  return std::move(*best);
}

CompositeReport composite_check(const FuzzyFunction& f, const FuzzyFunction& g,
                                std::span<const double> xstar, std::span<const Point> samples,
                                const DerivativeOptions& options) {
  FuzzyVector candidate = scale(-1.0, gradient(f, xstar, options));
  std::vector<ConvexSample> pairs;
  for (std::size_t q = 0; q + 1 < samples.size(); ++q) {
    pairs.push_back({samples[q], samples[q + 1], 0.5});
  }
  Certificate convexity = convexity_certificate(g, pairs);
  Certificate cert = verify_subgradient(g, xstar, candidate, samples);
  cert.check = "-grad F(x*) in dG(x*)";
  return {std::move(cert), std::move(candidate), std::move(convexity)};
}

namespace {

class ScalarSearch {
 public:
  ScalarSearch(const FuzzyFunction& f, const MinimizeOptions& options)
      : f_(f), options_(options) {}

  double value(const Point& x) {
    if (++evaluations_ > options_.max_iterations) {
      throw Error(ErrorKind::MaxIterations, "minimizer exceeded " +
                                                std::to_string(options_.max_iterations) +
                                                " function evaluations");
    }
    return options_.scalarization(eval_function(f_, x));
  }

  // Golden-section search for coordinate j over [a, b]; the bracket ends are
  // candidates too so boundary minima are found exactly.
  std::pair<double, double> line_search(Point x, std::size_t j, double a, double b) {
    constexpr double kInvPhi = 0.6180339887498949;
    auto at = [&](double c) {
      x[j] = c;
      return value(x);
    };
    double best_c = a, best_v = at(a);
    const double vb = at(b);
    if (vb < best_v) best_c = b, best_v = vb;
    double lo = a, hi = b;
    double c1 = hi - kInvPhi * (hi - lo), c2 = lo + kInvPhi * (hi - lo);
    double v1 = at(c1), v2 = at(c2);
    const double width = std::max((b - a) * 1e-9, 1e-12);
    while (hi - lo > width) {
      if (v1 <= v2) {
        hi = c2;
        c2 = c1;
        v2 = v1;
        c1 = hi - kInvPhi * (hi - lo);
        v1 = at(c1);
      } else {
        lo = c1;
        c1 = c2;
        v1 = v2;
        c2 = lo + kInvPhi * (hi - lo);
        v2 = at(c2);
      }
    }
    if (v1 < best_v) best_c = c1, best_v = v1;
    if (v2 < best_v) best_c = c2, best_v = v2;
    return {best_c, best_v};
  }

  std::size_t evaluations() const noexcept { return evaluations_; }

 private:
  const FuzzyFunction& f_;
  const MinimizeOptions& options_;
  std::size_t evaluations_ = 0;
};

}  // namespace

MinimizeResult minimize_scalarized(const FuzzyFunction& f, std::span<const double> x_init,
                                   const MinimizeOptions& options) {
  if (x_init.size() != f.domain_dim()) throw Error(ErrorKind::DimensionMismatch, "start point has the wrong dimension");
  if (!f.domain().contains(x_init)) throw Error(ErrorKind::DomainViolation, "start point lies outside the domain");
  if (!(options.initial_step > 0.0) || !(options.min_step > 0.0))
    throw Error(ErrorKind::InvalidInput, "minimizer steps must be positive");

  const std::size_t m = f.domain_dim();
  const DomainBox box = f.domain().empty() ? DomainBox::unbounded(m) : f.domain();
  ScalarSearch search(f, options);
  Point x(x_init.begin(), x_init.end());
  double fx = search.value(x);
  double step = options.initial_step;
  while (step >= options.min_step) {
    bool improved = false;
    for (std::size_t j = 0; j < m; ++j) {
      const double a = std::max(x[j] - step, box[j].lo);
      const double b = std::min(x[j] + step, box[j].hi);
      if (!(a < b)) continue;
      auto [c, v] = search.line_search(x, j, a, b);
      if (v < fx) {
        x[j] = c;
        fx = v;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }

  std::vector<Interval> around(m);
  for (std::size_t j = 0; j < m; ++j) {
    around[j] = {std::max(x[j] - options.certificate_radius, box[j].lo),
                 std::min(x[j] + options.certificate_radius, box[j].hi)};
  }
  const std::vector<Point> fresh = default_samples(DomainBox(std::move(around)), x, options.samples);
  MinimizeResult result{x, fx, search.evaluations(), verify_global_min(f, x, fresh)};
  return result;
}

}  // namespace fno
