#include "fno/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fno {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kDirectionOnly = std::numeric_limits<std::size_t>::max();

void require_dims(const FuzzyFunction& f, std::span<const double> t0, std::span<const double> d) {
  if (t0.size() != f.domain_dim() || d.size() != f.domain_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "point and direction must have dimension " +
                                                  std::to_string(f.domain_dim()));
  }
}

// Largest h >= 0 with t0 + sign*h*d still inside the box.
double max_step(const DomainBox& box, std::span<const double> t0, std::span<const double> d,
                double sign) {
  if (box.empty()) return kInf;
  double limit = kInf;
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double dj = sign * d[j];
    if (dj > 0.0) limit = std::min(limit, (box[j].hi - t0[j]) / dj);
    else if (dj < 0.0) limit = std::min(limit, (box[j].lo - t0[j]) / dj);
  }
  return std::max(limit, 0.0);
}

struct EndpointEstimates {
  std::vector<double> lo;
  std::vector<double> hi;
  double error = 0.0;
  std::vector<StepRecord> history;
};

// Richardson tableau over the quotients q[j][x] taken with steps h_j halving
// each time. For every endpoint x the entry with the smallest error estimate
// wins.
EndpointEstimates extrapolate(const std::vector<std::vector<double>>& q,
                              const std::vector<double>& steps, std::size_t half) {
  const std::size_t rows = q.size();
  const std::size_t width = q.front().size();
  std::vector<double> best(width), err(width, kInf);
  std::vector<double> diag_change(rows, 0.0);

  std::vector<double> prev, cur;
  for (std::size_t x = 0; x < width; ++x) {
    prev.assign(1, q[0][x]);
    best[x] = q[0][x];
    for (std::size_t j = 1; j < rows; ++j) {
      cur.assign(j + 1, 0.0);
      cur[0] = q[j][x];
      double factor = 1.0;
      for (std::size_t i = 1; i <= j; ++i) {
        factor *= 2.0;
        cur[i] = cur[i - 1] + (cur[i - 1] - prev[i - 1]) / (factor - 1.0);
        const double e = std::max(std::abs(cur[i] - cur[i - 1]), std::abs(cur[i] - prev[i - 1]));
        if (e <= err[x]) {
          err[x] = e;
          best[x] = cur[i];
        }
      }
      diag_change[j] = std::max(diag_change[j], std::abs(cur[j] - prev[j - 1]));
      std::swap(prev, cur);
    }
    if (rows == 1) err[x] = 0.0;
  }

  EndpointEstimates out;
  out.lo.assign(best.begin(), best.begin() + static_cast<std::ptrdiff_t>(half));
  out.hi.assign(best.begin() + static_cast<std::ptrdiff_t>(half), best.end());
  out.error = width ? *std::max_element(err.begin(), err.end()) : 0.0;
  for (std::size_t j = 1; j < rows; ++j) out.history.push_back({steps[j], diag_change[j]});
  return out;
}

EndpointEstimates estimate_endpoints(const FuzzyFunction& f, std::span<const double> t0,
                                     std::span<const double> d, Side side,
                                     const DerivativeOptions& options) {
  if (options.steps < 2) throw Error(ErrorKind::InvalidInput, "need at least two finite-difference steps");
  if (!(options.initial_step > 0.0)) throw Error(ErrorKind::InvalidInput, "initial step must be positive");
  const double sign = side == Side::Left ? -1.0 : 1.0;
  const double room = max_step(f.domain(), t0, d, sign);
  const double h0 = std::min(options.initial_step, room);
  if (!(h0 > 0.0)) {
    throw Error(ErrorKind::DomainViolation, std::string("no room on the ") +
                                                (side == Side::Left ? "left" : "right") +
                                                " of the base point along the direction");
  }

  const FuzzyNCell base = eval_function(f, t0);
  const std::size_t size = base.lower_data().size();
  std::vector<std::vector<double>> q;
  std::vector<double> steps;
  std::vector<double> lo(size), hi(size), probe(t0.size());
  double h = h0;
  for (std::size_t j = 0; j < options.steps; ++j, h *= 0.5) {
    for (std::size_t c = 0; c < t0.size(); ++c) probe[c] = t0[c] + sign * h * d[c];
    f.evaluate_raw(probe, lo, hi);
    std::vector<double> row(2 * size);
    const double denom = sign * h;
    for (std::size_t x = 0; x < size; ++x) {
      row[x] = (lo[x] - base.lower_data()[x]) / denom;
      row[size + x] = (hi[x] - base.upper_data()[x]) / denom;
    }
    q.push_back(std::move(row));
    steps.push_back(h);
  }
  return extrapolate(q, steps, size);
}

// Levelwise assembly: lower = suffix min over levels >= r of the smaller
// endpoint derivative, upper = suffix max of the larger one.
FuzzyNCell assemble(const GridPtr& grid, std::size_t cells, const std::vector<double>& dlo,
                    const std::vector<double>& dhi) {
  const std::size_t L = grid->size();
  std::vector<double> lo(cells * L), hi(cells * L);
  for (std::size_t i = 0; i < cells; ++i) {
    double run_lo = kInf, run_hi = -kInf;
    for (std::size_t k = L; k-- > 0;) {
      const std::size_t x = i * L + k;
      run_lo = std::min(run_lo, std::min(dlo[x], dhi[x]));
      run_hi = std::max(run_hi, std::max(dlo[x], dhi[x]));
      lo[x] = run_lo;
      hi[x] = run_hi;
    }
  }
  return FuzzyNCell::from_endpoints(grid, cells, std::move(lo), std::move(hi),
                                    ErrorKind::NotRepresentable);
}

DerivativeReport one_sided(const FuzzyFunction& f, std::span<const double> t0,
                           std::span<const double> d, Side side, const DerivativeOptions& options) {
  EndpointEstimates est = estimate_endpoints(f, t0, d, side, options);
  for (double v : est.lo) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NotRepresentable, "endpoint derivative is not finite");
  }
  for (double v : est.hi) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NotRepresentable, "endpoint derivative is not finite");
  }
  DerivativeReport report{assemble(f.grid(), f.cell_dim(), est.lo, est.hi),
                          est.error < options.tolerance, est.error, std::move(est.history), side};
  if (!report.converged && options.require_convergence) {
    throw Error(ErrorKind::NoConvergence, "finite differences did not settle: error estimate " +
                                              std::to_string(report.error_estimate) +
                                              " exceeds " + std::to_string(options.tolerance));
  }
  return report;
}

DerivativeReport two_sided(const FuzzyFunction& f, std::span<const double> t0,
                           std::span<const double> d, std::size_t coordinate,
                           const DerivativeOptions& options) {
  const bool has_right = max_step(f.domain(), t0, d, 1.0) > 0.0;
  const bool has_left = max_step(f.domain(), t0, d, -1.0) > 0.0;
  if (has_right && !has_left) return one_sided(f, t0, d, Side::Right, options);
  if (has_left && !has_right) return one_sided(f, t0, d, Side::Left, options);
  if (!has_left && !has_right) {
    throw Error(ErrorKind::DomainViolation, "the domain leaves no room on either side of the point");
  }

  DerivativeReport right = one_sided(f, t0, d, Side::Right, options);
  DerivativeReport left = one_sided(f, t0, d, Side::Left, options);
  const double gap = distance(right.value, left.value);
  if (gap > options.tolerance) {
    throw NotDifferentiableError(coordinate, std::move(right), std::move(left), gap);
  }
  DerivativeReport out{scale(0.5, add(right.value, left.value)), right.converged && left.converged,
                       std::max(right.error_estimate, left.error_estimate),
                       std::move(right.step_history), Side::TwoSided};
  return out;
}

std::string not_differentiable_message(std::size_t coordinate, double gap) {
  std::string where = coordinate == kDirectionOnly
                          ? std::string("along the direction")
                          : "in coordinate " + std::to_string(coordinate + 1);
  return "left and right derivatives differ " + where + " (D_L gap " + std::to_string(gap) + ")";
}

}  // namespace

std::string_view to_string(Side side) {
  switch (side) {
    case Side::Right: return "right";
    case Side::Left: return "left";
    case Side::TwoSided: return "two-sided";
  }
  return "?";
}

NotDifferentiableError::NotDifferentiableError(std::size_t coordinate, DerivativeReport right,
                                               DerivativeReport left, double gap)
    : Error(ErrorKind::NotDifferentiable, not_differentiable_message(coordinate, gap)),
      coordinate_(coordinate), right_(std::move(right)), left_(std::move(left)), gap_(gap) {}

double endpoint_dir_derivative(const FuzzyFunction& f, std::span<const double> t0,
                               std::span<const double> d, std::size_t cell, std::size_t level,
                               Endpoint endpoint, Side side, const DerivativeOptions& options) {
  require_dims(f, t0, d);
  const std::size_t L = f.grid()->size();
  if (cell >= f.cell_dim() || level >= L) {
    throw Error(ErrorKind::IndexOutOfRange, "endpoint index out of range");
  }
  const std::size_t x = cell * L + level;
  auto pick = [&](Side s) {
    EndpointEstimates est = estimate_endpoints(f, t0, d, s, options);
    if (est.error >= options.tolerance && options.require_convergence) {
      throw Error(ErrorKind::NoConvergence, "finite differences did not settle");
    }
    return endpoint == Endpoint::Lower ? est.lo[x] : est.hi[x];
  };
  if (side != Side::TwoSided) return pick(side);
  const double right = pick(Side::Right);
  const double left = pick(Side::Left);
  if (std::abs(right - left) > options.tolerance) {
    throw Error(ErrorKind::NotDifferentiable, "left and right endpoint derivatives differ");
  }
  return 0.5 * (right + left);
}

DerivativeReport directional_derivative(const FuzzyFunction& f, std::span<const double> t0,
                                        std::span<const double> d, Side side,
                                        const DerivativeOptions& options) {
  require_dims(f, t0, d);
  if (side == Side::TwoSided) return two_sided(f, t0, d, kDirectionOnly, options);
  return one_sided(f, t0, d, side, options);
}

DerivativeReport partial_derivative(const FuzzyFunction& f, std::span<const double> t0,
                                    std::size_t j, const DerivativeOptions& options) {
  if (j >= f.domain_dim()) throw Error(ErrorKind::IndexOutOfRange, "coordinate index out of range");
  std::vector<double> e(f.domain_dim(), 0.0);
  e[j] = 1.0;
  require_dims(f, t0, e);
  return two_sided(f, t0, e, j, options);
}

FuzzyVector gradient(const FuzzyFunction& f, std::span<const double> t0,
                     const DerivativeOptions& options) {
  std::vector<FuzzyNCell> parts;
  parts.reserve(f.domain_dim());
  for (std::size_t j = 0; j < f.domain_dim(); ++j) {
    parts.push_back(partial_derivative(f, t0, j, options).value);
  }
  return FuzzyVector(std::move(parts));
}

namespace {

std::vector<double> combine(const ConvexSample& s) {
  if (!(s.lambda >= 0.0 && s.lambda <= 1.0)) {
    throw Error(ErrorKind::InvalidInput, "convex combination weight must lie in [0, 1]");
  }
  if (s.x.size() != s.y.size()) throw Error(ErrorKind::DimensionMismatch, "sample pair differs in dimension");
  std::vector<double> z(s.x.size());
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = s.lambda * s.x[j] + (1.0 - s.lambda) * s.y[j];
  return z;
}

Witness convexity_witness(const ConvexSample& s) {
  Witness w;
  w.point = s.x;
  w.second_point = s.y;
  w.weight = s.lambda;
  return w;
}

}  // namespace

Certificate convexity_certificate(const FuzzyFunction& f, std::span<const ConvexSample> samples) {
  Certificate cert;
  cert.check = "F(lx+(1-l)y) <= l F(x) + (1-l) F(y)";
  for (const auto& s : samples) {
    const std::vector<double> z = combine(s);
    const FuzzyNCell lhs = eval_function(f, z);
    const FuzzyNCell rhs = add(scale(s.lambda, eval_function(f, s.x)),
                               scale(1.0 - s.lambda, eval_function(f, s.y)));
    ++cert.samples_used;
    const OrderResult ord = order(lhs, rhs);
    if (!ord.le()) {
      const OrderWitness& at = *ord.not_le;
      Witness w = convexity_witness(s);
      w.violation = at;
      const bool lower = at.side == Endpoint::Lower;
      w.lhs = lower ? lhs.lo(at.cell, at.level) : lhs.hi(at.cell, at.level);
      w.rhs = lower ? rhs.lo(at.cell, at.level) : rhs.hi(at.cell, at.level);
      w.reason = "value at the convex combination exceeds the combined values";
      cert.status = Status::Refuted;
      cert.witness = std::move(w);
      return cert;
    }
  }
  return cert;
}

Certificate endpoint_convexity_certificate(const FuzzyFunction& f,
                                           std::span<const ConvexSample> samples) {
  Certificate cert;
  cert.check = "every endpoint curve convex in t";
  const std::size_t L = f.grid()->size();
  const std::size_t size = f.cell_dim() * L;
  std::vector<double> zl(size), zh(size), xl(size), xh(size), yl(size), yh(size);
  for (const auto& s : samples) {
    const std::vector<double> z = combine(s);
    for (const auto* p : {&s.x, &s.y, &z}) {
      if (p->size() != f.domain_dim()) throw Error(ErrorKind::DimensionMismatch, "sample has the wrong dimension");
      if (!f.domain().contains(*p)) throw Error(ErrorKind::DomainViolation, "convexity sample outside the domain");
    }
    f.evaluate_raw(z, zl, zh);
    f.evaluate_raw(s.x, xl, xh);
    f.evaluate_raw(s.y, yl, yh);
    ++cert.samples_used;
    for (std::size_t x = 0; x < size; ++x) {
      for (Endpoint e : {Endpoint::Lower, Endpoint::Upper}) {
        const bool lower = e == Endpoint::Lower;
        const double lhs = lower ? zl[x] : zh[x];
        const double rhs = s.lambda * (lower ? xl[x] : xh[x]) + (1.0 - s.lambda) * (lower ? yl[x] : yh[x]);
        if (lhs > rhs + kOrderTolerance) {
          Witness w = convexity_witness(s);
          w.violation = OrderWitness{x / L, x % L, e};
          w.lhs = lhs;
          w.rhs = rhs;
          w.reason = "endpoint curve is not convex along the segment";
          cert.status = Status::Refuted;
          cert.witness = std::move(w);
          return cert;
        }
      }
    }
  }
  return cert;
}

GradientIdentityReport check_gradient_identity(const FuzzyFunction& f, std::span<const double> t,
                                               std::span<const double> d,
                                               const DerivativeOptions& options) {
  require_dims(f, t, d);
  FuzzyNCell directional = directional_derivative(f, t, d, Side::Right, options).value;
  FuzzyNCell via_gradient = dot_real(gradient(f, t, options), d);
  const double gap = distance(directional, via_gradient);
  Certificate cert;
  cert.check = "F'(t; d) = grad F(t) . d";
  cert.samples_used = 1;
  if (!(gap < 10.0 * options.tolerance)) {
    cert.status = Status::Refuted;
    Witness w;
    w.point.assign(t.begin(), t.end());
    w.second_point.assign(d.begin(), d.end());
    w.lhs = gap;
    w.rhs = 10.0 * options.tolerance;
    w.reason = "directional derivative and gradient product differ in D_L";
    cert.witness = std::move(w);
  }
  return {std::move(cert), std::move(directional), std::move(via_gradient), gap};
}

}  // namespace fno
