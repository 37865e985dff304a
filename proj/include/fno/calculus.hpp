#pragma once

// Numerical directional derivatives of fuzzy functions.
//
// Endpoint derivatives are one-sided difference quotients along d on the
// step schedule h_j = initial_step * 2^-j, refined by a Richardson tableau.
// The fuzzy derivative is then assembled per level from the endpoint
// derivatives at that level and every level above it (suffix min/max), which
// is the levelwise form of the g-difference quotient limit.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fno/certificate.hpp"
#include "fno/funcspace.hpp"
#include "fno/levelsets.hpp"

namespace fno {

inline constexpr double kConvergenceTolerance = 1e-6;

enum class Side { Right, Left, TwoSided };

std::string_view to_string(Side side);

struct DerivativeOptions {
  double initial_step = 1e-2;
  std::size_t steps = 13;
  double tolerance = kConvergenceTolerance;
  /// Throw NoConvergence instead of returning a report with converged=false.
  bool require_convergence = true;
};

struct StepRecord {
  double h = 0.0;
  /// Largest endpoint change between consecutive diagonal Richardson entries.
  double change = 0.0;
};

struct DerivativeReport {
  FuzzyNCell value;
  bool converged = false;
  /// Largest Richardson error estimate over all endpoints.
  double error_estimate = 0.0;
  std::vector<StepRecord> step_history;
  Side side = Side::Right;
};

/// Raised by partial_derivative when the left and right assemblies differ by
/// more than the tolerance in D_L. Both assemblies are kept for reporting.
class NotDifferentiableError : public Error {
 public:
  NotDifferentiableError(std::size_t coordinate, DerivativeReport right, DerivativeReport left,
                         double gap);

  std::size_t coordinate() const noexcept { return coordinate_; }
  const DerivativeReport& right() const noexcept { return right_; }
  const DerivativeReport& left() const noexcept { return left_; }
  double gap() const noexcept { return gap_; }

 private:
  std::size_t coordinate_;
  DerivativeReport right_;
  DerivativeReport left_;
  double gap_;
};

/// One-sided derivative of a single endpoint curve F_i^-(r_k, .) or
/// F_i^+(r_k, .) along d. Side::Left gives lim_{h->0-}.
double endpoint_dir_derivative(const FuzzyFunction& f, std::span<const double> t0,
                               std::span<const double> d, std::size_t cell, std::size_t level,
                               Endpoint endpoint, Side side = Side::Right,
                               const DerivativeOptions& options = {});

/// F'(t0; d) for side Right (the usual directional derivative) or Left.
DerivativeReport directional_derivative(const FuzzyFunction& f, std::span<const double> t0,
                                        std::span<const double> d, Side side = Side::Right,
                                        const DerivativeOptions& options = {});

/// Two-sided partial derivative along e_j. At a domain boundary only the
/// feasible side is used and the report says which.
DerivativeReport partial_derivative(const FuzzyFunction& f, std::span<const double> t0,
                                    std::size_t j, const DerivativeOptions& options = {});

FuzzyVector gradient(const FuzzyFunction& f, std::span<const double> t0,
                     const DerivativeOptions& options = {});

struct ConvexSample {
  std::vector<double> x;
  std::vector<double> y;
  double lambda = 0.5;
};

/// Samples F(lx + (1-l)y) <= l F(x) + (1-l) F(y) in the fuzzy order.
Certificate convexity_certificate(const FuzzyFunction& f, std::span<const ConvexSample> samples);

/// Same inequality checked on every endpoint curve separately as a real
/// function of t, without building fuzzy numbers.
Certificate endpoint_convexity_certificate(const FuzzyFunction& f,
                                           std::span<const ConvexSample> samples);

struct GradientIdentityReport {
  Certificate certificate;
  FuzzyNCell directional;
  FuzzyNCell via_gradient;
  double distance = 0.0;
};

/// Compares F'(t; d) with grad F(t) . d; Verified when they are within
/// 10 * tolerance in D_L.
GradientIdentityReport check_gradient_identity(const FuzzyFunction& f, std::span<const double> t,
                                               std::span<const double> d,
                                               const DerivativeOptions& options = {});

}  // namespace fno
