#pragma once

// Fuzzy n-cell number valued functions F : M subset R^m -> L(E^n).
//
// A FuzzyFunction is a pure evaluator that fills the endpoint arrays of F(t)
// for every grid level. eval_function() wraps it with the domain check and
// the level-set legality check, so a FuzzyNCell obtained from a function is
// always legal.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fno/expr.hpp"
#include "fno/levelsets.hpp"

namespace fno {

/// Axis-aligned box bounding the domain M. An empty box means R^m; bounds may
/// be infinite.
class DomainBox {
 public:
  DomainBox() = default;
  explicit DomainBox(std::vector<Interval> bounds);

  static DomainBox unbounded(std::size_t m);
  static DomainBox nonnegative_orthant(std::size_t m);

  bool empty() const noexcept { return bounds_.empty(); }
  std::size_t size() const noexcept { return bounds_.size(); }
  const Interval& operator[](std::size_t j) const { return bounds_[j]; }
  const std::vector<Interval>& bounds() const noexcept { return bounds_; }

  bool contains(std::span<const double> t, double tol = 1e-12) const;
  bool is_finite() const;

  friend DomainBox intersect(const DomainBox& a, const DomainBox& b);

 private:
  std::vector<Interval> bounds_;
};

using EndpointFn = std::function<double(double r, std::span<const double> t)>;

class FuzzyFunction {
 public:
  /// Fills lo/hi (row-major, cell * L + level) for the point t.
  using RawEvaluator =
      std::function<void(std::span<const double> t, std::span<double> lo, std::span<double> hi)>;

  FuzzyFunction(std::size_t m, std::size_t n, GridPtr grid, RawEvaluator evaluator,
                DomainBox domain = {});

  /// One lower and one upper evaluator per cell.
  static FuzzyFunction from_endpoints(GridPtr grid, std::size_t m, std::vector<EndpointFn> lower,
                                      std::vector<EndpointFn> upper, DomainBox domain = {});
  static FuzzyFunction from_expressions(GridPtr grid, std::size_t m,
                                        std::vector<ExprProgram> lower,
                                        std::vector<ExprProgram> upper, DomainBox domain = {});
  /// F(t) = value for every t.
  static FuzzyFunction constant(FuzzyNCell value, std::size_t m, DomainBox domain = {});

  std::size_t domain_dim() const noexcept { return m_; }
  std::size_t cell_dim() const noexcept { return n_; }
  const GridPtr& grid() const noexcept { return grid_; }
  const DomainBox& domain() const noexcept { return domain_; }

  FuzzyNCell operator()(std::span<const double> t) const;

  /// Endpoints at t without the domain and legality checks.
  void evaluate_raw(std::span<const double> t, std::span<double> lo, std::span<double> hi) const;

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  GridPtr grid_;
  std::shared_ptr<const RawEvaluator> evaluator_;
  DomainBox domain_;
};

/// Samples every endpoint of F at t and validates the result. Throws
/// DomainViolation outside the domain box and InvalidLevelSets when the
/// endpoint evaluators do not describe a legal fuzzy number at t.
FuzzyNCell eval_function(const FuzzyFunction& f, std::span<const double> t);

/// (k F)(t) = k F(t).
FuzzyFunction scale(double k, const FuzzyFunction& f);
/// (F + G)(t) = F(t) + G(t) on the intersection of both domains.
FuzzyFunction add(const FuzzyFunction& f, const FuzzyFunction& g);

/// Symmetric n x n matrix of 1-cell fuzzy numbers whose lower and upper
/// endpoint matrices are positive semidefinite at every level.
class FuzzyMatrix {
 public:
  /// Throws InvariantViolation when symmetry or semidefiniteness fails.
  explicit FuzzyMatrix(std::vector<std::vector<FuzzyNCell>> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  const FuzzyNCell& operator()(std::size_t k, std::size_t j) const { return entries_[k][j]; }
  const GridPtr& grid() const { return entries_.front().front().grid(); }

 private:
  std::vector<std::vector<FuzzyNCell>> entries_;
};

/// F(x) = 1/2 x^T A x + b^T x on the nonnegative orthant.
FuzzyFunction fuzzy_quadratic(const FuzzyMatrix& a, const FuzzyVector& b);

}  // namespace fno
