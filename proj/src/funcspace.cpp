#include "fno/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "format.hpp"

namespace fno {

namespace {

using detail::format_point;

constexpr double kPsdTolerance = 1e-9;

}  // namespace

DomainBox::DomainBox(std::vector<Interval> bounds) : bounds_(std::move(bounds)) {
  for (const auto& b : bounds_) {
    if (std::isnan(b.lo) || std::isnan(b.hi) || b.lo > b.hi)
      throw Error(ErrorKind::InvalidInput, "domain box bounds must satisfy lo <= hi");
  }
}

DomainBox DomainBox::unbounded(std::size_t m) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return DomainBox(std::vector<Interval>(m, Interval{-inf, inf}));
}

DomainBox DomainBox::nonnegative_orthant(std::size_t m) {
  return DomainBox(std::vector<Interval>(m, Interval{0.0, std::numeric_limits<double>::infinity()}));
}

bool DomainBox::contains(std::span<const double> t, double tol) const {
  if (bounds_.empty()) return true;
  if (t.size() != bounds_.size()) return false;
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (!(t[j] >= bounds_[j].lo - tol && t[j] <= bounds_[j].hi + tol)) return false;
  }
  return true;
}

bool DomainBox::is_finite() const {
  if (bounds_.empty()) return false;
  return std::all_of(bounds_.begin(), bounds_.end(),
                     [](const Interval& b) { return std::isfinite(b.lo) && std::isfinite(b.hi); });
}

DomainBox intersect(const DomainBox& a, const DomainBox& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "domain boxes differ in dimension");
  std::vector<Interval> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    out[j] = {std::max(a[j].lo, b[j].lo), std::min(a[j].hi, b[j].hi)};
    if (out[j].lo > out[j].hi) throw Error(ErrorKind::DomainViolation, "domains do not intersect");
  }
  return DomainBox(std::move(out));
}

FuzzyFunction::FuzzyFunction(std::size_t m, std::size_t n, GridPtr grid, RawEvaluator evaluator,
                             DomainBox domain)
    : m_(m), n_(n), grid_(std::move(grid)),
      evaluator_(std::make_shared<const RawEvaluator>(std::move(evaluator))),
      domain_(std::move(domain)) {
  if (!grid_) throw Error(ErrorKind::InvalidInput, "missing level grid");
  if (n_ == 0) throw Error(ErrorKind::DimensionMismatch, "a fuzzy function needs at least one cell");
  if (!domain_.empty() && domain_.size() != m_)
    throw Error(ErrorKind::DimensionMismatch, "domain box dimension does not match m");
}

FuzzyFunction FuzzyFunction::from_endpoints(GridPtr grid, std::size_t m,
                                            std::vector<EndpointFn> lower,
                                            std::vector<EndpointFn> upper, DomainBox domain) {
  if (lower.size() != upper.size())
    throw Error(ErrorKind::DimensionMismatch, "need as many upper as lower endpoint functions");
  const std::size_t n = lower.size();
  auto g = grid;
  RawEvaluator eval = [g, lower = std::move(lower), upper = std::move(upper)](
                          std::span<const double> t, std::span<double> lo, std::span<double> hi) {
    const std::size_t L = g->size();
    for (std::size_t i = 0; i < lower.size(); ++i) {
      for (std::size_t k = 0; k < L; ++k) {
        const double r = (*g)[k];
        lo[i * L + k] = lower[i](r, t);
        hi[i * L + k] = upper[i](r, t);
      }
    }
  };
  return FuzzyFunction(m, n, std::move(grid), std::move(eval), std::move(domain));
}

FuzzyFunction FuzzyFunction::from_expressions(GridPtr grid, std::size_t m,
                                              std::vector<ExprProgram> lower,
                                              std::vector<ExprProgram> upper, DomainBox domain) {
  std::vector<EndpointFn> lo, hi;
  for (auto& p : lower) {
    if (p.domain_dim() != m) throw Error(ErrorKind::DimensionMismatch, "expression arity differs from m");
    lo.emplace_back([p = std::move(p)](double r, std::span<const double> t) { return p.evaluate(t, r); });
  }
  for (auto& p : upper) {
    if (p.domain_dim() != m) throw Error(ErrorKind::DimensionMismatch, "expression arity differs from m");
    hi.emplace_back([p = std::move(p)](double r, std::span<const double> t) { return p.evaluate(t, r); });
  }
  return from_endpoints(std::move(grid), m, std::move(lo), std::move(hi), std::move(domain));
}

FuzzyFunction FuzzyFunction::constant(FuzzyNCell value, std::size_t m, DomainBox domain) {
  const std::size_t n = value.cells();
  GridPtr grid = value.grid();
  RawEvaluator eval = [value = std::move(value)](std::span<const double>, std::span<double> lo,
                                                 std::span<double> hi) {
    std::copy(value.lower_data().begin(), value.lower_data().end(), lo.begin());
    std::copy(value.upper_data().begin(), value.upper_data().end(), hi.begin());
  };
  return FuzzyFunction(m, n, std::move(grid), std::move(eval), std::move(domain));
}

void FuzzyFunction::evaluate_raw(std::span<const double> t, std::span<double> lo,
                                 std::span<double> hi) const {
  (*evaluator_)(t, lo, hi);
}

FuzzyNCell FuzzyFunction::operator()(std::span<const double> t) const {
  return eval_function(*this, t);
}

FuzzyNCell eval_function(const FuzzyFunction& f, std::span<const double> t) {
  if (t.size() != f.domain_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "point " + format_point(t) + " has dimension " +
                                                  std::to_string(t.size()) + ", expected " +
                                                  std::to_string(f.domain_dim()));
  }
  if (!f.domain().contains(t)) {
    throw Error(ErrorKind::DomainViolation, "point " + format_point(t) + " lies outside the domain");
  }
  const std::size_t size = f.cell_dim() * f.grid()->size();
  std::vector<double> lo(size), hi(size);
  f.evaluate_raw(t, lo, hi);
  if (auto problem = check_level_sets(*f.grid(), f.cell_dim(), lo, hi)) {
    throw Error(ErrorKind::InvalidLevelSets, "F" + format_point(t) + ": " + *problem);
  }
  return FuzzyNCell::from_endpoints(f.grid(), f.cell_dim(), std::move(lo), std::move(hi));
}

FuzzyFunction scale(double k, const FuzzyFunction& f) {
  FuzzyFunction::RawEvaluator eval = [k, f](std::span<const double> t, std::span<double> lo,
                                            std::span<double> hi) {
    const FuzzyNCell v = scale(k, eval_function(f, t));
    std::copy(v.lower_data().begin(), v.lower_data().end(), lo.begin());
    std::copy(v.upper_data().begin(), v.upper_data().end(), hi.begin());
  };
  return FuzzyFunction(f.domain_dim(), f.cell_dim(), f.grid(), std::move(eval), f.domain());
}

FuzzyFunction add(const FuzzyFunction& f, const FuzzyFunction& g) {
  if (f.grid() != g.grid()) throw Error(ErrorKind::GridMismatch, "functions live on different grids");
  if (f.cell_dim() != g.cell_dim() || f.domain_dim() != g.domain_dim())
    throw Error(ErrorKind::DimensionMismatch, "functions differ in m or n");
  FuzzyFunction::RawEvaluator eval = [f, g](std::span<const double> t, std::span<double> lo,
                                            std::span<double> hi) {
    const FuzzyNCell v = add(eval_function(f, t), eval_function(g, t));
    std::copy(v.lower_data().begin(), v.lower_data().end(), lo.begin());
    std::copy(v.upper_data().begin(), v.upper_data().end(), hi.begin());
  };
  return FuzzyFunction(f.domain_dim(), f.cell_dim(), f.grid(), std::move(eval),
                       intersect(f.domain(), g.domain()));
}

FuzzyMatrix::FuzzyMatrix(std::vector<std::vector<FuzzyNCell>> entries)
    : entries_(std::move(entries)) {
  const std::size_t n = entries_.size();
  if (n == 0) throw Error(ErrorKind::InvariantViolation, "empty fuzzy matrix");
  for (const auto& row : entries_) {
    if (row.size() != n) throw Error(ErrorKind::InvariantViolation, "fuzzy matrix must be square");
    for (const auto& e : row) {
      if (e.cells() != 1) throw Error(ErrorKind::InvariantViolation, "matrix entries must be 1-cell numbers");
      if (e.grid() != entries_[0][0].grid())
        throw Error(ErrorKind::GridMismatch, "matrix entries live on different grids");
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = k + 1; j < n; ++j) {
      if (distance(entries_[k][j], entries_[j][k]) > kOrderTolerance) {
        throw Error(ErrorKind::InvariantViolation, "fuzzy matrix is not symmetric at (" +
                                                       std::to_string(k) + ", " +
                                                       std::to_string(j) + ")");
      }
    }
  }
  const std::size_t L = entries_[0][0].levels();
  Eigen::MatrixXd lower(n, n), upper(n, n);
  for (std::size_t lvl = 0; lvl < L; ++lvl) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        lower(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = entries_[k][j].lo(0, lvl);
        upper(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = entries_[k][j].hi(0, lvl);
      }
    }
    for (const Eigen::MatrixXd* mat : {&lower, &upper}) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(*mat, Eigen::EigenvaluesOnly);
      if (solver.eigenvalues().minCoeff() < -kPsdTolerance) {
        throw Error(ErrorKind::InvariantViolation,
                    std::string(mat == &lower ? "lower" : "upper") +
                        " endpoint matrix is not positive semidefinite at r=" +
                        std::to_string((*entries_[0][0].grid())[lvl]));
      }
    }
  }
}

FuzzyFunction fuzzy_quadratic(const FuzzyMatrix& a, const FuzzyVector& b) {
  const std::size_t m = a.size();
  if (b.size() != m) throw Error(ErrorKind::DimensionMismatch, "b must have one entry per row of A");
  for (const auto& c : b.components()) {
    if (c.cells() != 1) throw Error(ErrorKind::InvariantViolation, "b entries must be 1-cell numbers");
    if (c.grid() != a.grid()) throw Error(ErrorKind::GridMismatch, "A and b live on different grids");
  }
  FuzzyFunction::RawEvaluator eval = [a, b, m](std::span<const double> x, std::span<double> lo,
                                               std::span<double> hi) {
    FuzzyNCell acc = make_zero(1, a.grid());
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t j = 0; j < m; ++j) {
        acc = add(acc, scale(0.5 * x[k] * x[j], a(k, j)));
      }
      acc = add(acc, scale(x[k], b[k]));
    }
    std::copy(acc.lower_data().begin(), acc.lower_data().end(), lo.begin());
    std::copy(acc.upper_data().begin(), acc.upper_data().end(), hi.begin());
  };
  return FuzzyFunction(m, 1, a.grid(), std::move(eval), DomainBox::nonnegative_orthant(m));
}

}  // namespace fno
