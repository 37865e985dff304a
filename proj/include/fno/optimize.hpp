#pragma once

// Optimality checks for  min F(x)  subject to  G_j(x) <= 0  (j = 1..k),
// x in a domain box, where F and G_j are fuzzy-valued.
//
// "min" has no unique meaning under the partial order, so the search routines
// work on a real scalarization and every claimed optimum is certified in the
// order separately.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fno/calculus.hpp"
#include "fno/certificate.hpp"
#include "fno/funcspace.hpp"
#include "fno/sampling.hpp"

namespace fno {

inline constexpr double kComplementarityTolerance = 1e-8;
inline constexpr double kSlaterMargin = 1e-6;

struct Problem {
  FuzzyFunction objective;
  std::vector<FuzzyFunction> constraints;
  DomainBox domain;

  /// Checks that every function shares m, n and the grid.
  void validate() const;
  std::size_t domain_dim() const noexcept { return objective.domain_dim(); }
};

using Scalarization = std::function<double(const FuzzyNCell&)>;

/// Mean of every lower and upper endpoint over all cells and levels.
double mean_endpoints(const FuzzyNCell& u);
/// Weighted mean of (lo + hi) / 2 over levels, weights indexed by level.
Scalarization level_weighted(std::vector<double> weights);

struct GlobalMinReport {
  Certificate certificate;
  /// F(x) >= F(x0) for every sample x.
  Certificate order_branch;
  /// The zero vector is a subgradient at x0.
  Certificate subgradient_branch;
};

GlobalMinReport verify_global_min(const FuzzyFunction& f, std::span<const double> x0,
                                  std::span<const Point> samples);

struct KKTOptions {
  double complementarity_tolerance = kComplementarityTolerance;
  double slater_margin = kSlaterMargin;
  /// Throw InfeasiblePoint for an infeasible x* instead of reporting it.
  bool strict_feasibility = false;
};

struct KKTReport {
  std::vector<double> multipliers;
  /// D_L(l_j G_j(x*), 0) per constraint.
  std::vector<double> complementarity;
  /// G_j(x*) <= 0 per constraint.
  std::vector<bool> feasible;
  bool complementarity_holds = true;
  /// 0 in d(F + sum l_j G_j)(x*).
  Certificate stationarity;
  /// First sample with every G_j endpoint below -margin.
  std::optional<Point> slater_witness;

  bool verified() const noexcept { return complementarity_holds && stationarity.verified(); }
  bool feasible_point() const noexcept;
};

/// x -> F(x) + sum_j l_j G_j(x); terms with l_j = 0 are dropped.
FuzzyFunction aggregate(const Problem& p, std::span<const double> lambda);

KKTReport kkt_verify(const Problem& p, std::span<const double> xstar,
                     std::span<const double> lambda, std::span<const Point> samples,
                     const KKTOptions& options = {});

/// {0, 0.25, ..., 4} for each of the k multipliers.
std::vector<std::vector<double>> default_lambda_grid(std::size_t k);

struct KKTSearchResult {
  bool found = false;
  /// The verifying multipliers, or the best-scoring ones when nothing verifies.
  std::vector<double> lambda;
  KKTReport report;
  std::size_t candidates_tried = 0;
};

/// Scans the product grid with the first multiplier varying slowest and stops
/// at the first fully verifying point. Candidates are scored by
/// (stationarity failed ? 1 : 0) + largest complementarity distance.
KKTSearchResult kkt_search(const Problem& p, std::span<const double> xstar,
                           const std::vector<std::vector<double>>& lambda_grid,
                           std::span<const Point> samples, const KKTOptions& options = {});

FuzzyNCell lagrangian(const Problem& p, std::span<const double> x, std::span<const double> lambda);

struct DualResult {
  Point x_min;
  FuzzyNCell value;
  double scalar = 0.0;
  /// Always true: the minimum is taken in the scalarization, not the order.
  bool scalarized = true;
};

/// Minimizes the scalarized Lagrangian over the samples; ties keep the first.
DualResult dual_eval(const Problem& p, std::span<const double> lambda,
                     std::span<const Point> samples, const Scalarization& s = mean_endpoints);

struct CompositeReport {
  Certificate certificate;
  /// -grad F(x*), the candidate subgradient of G.
  FuzzyVector candidate;
  /// Sampled convexity of G on consecutive sample pairs.
  Certificate convexity;
};

/// Checks -grad F(x*) in dG(x*) on the samples.
CompositeReport composite_check(const FuzzyFunction& f, const FuzzyFunction& g,
                                std::span<const double> xstar, std::span<const Point> samples,
                                const DerivativeOptions& options = {});

struct MinimizeOptions {
  double initial_step = 1.0;
  double min_step = 1e-6;
  std::size_t max_iterations = 100000;
  /// Half-width of the box around x_best sampled for the certificate.
  double certificate_radius = 1.0;
  SampleOptions samples;
  Scalarization scalarization = mean_endpoints;
};

struct MinimizeResult {
  Point x_best;
  double scalar = 0.0;
  std::size_t iterations = 0;
  GlobalMinReport certificate;
};

/// Coordinate descent with golden-section line searches on the
/// scalarization, halving the bracket half-width whenever a full sweep finds
/// no strict improvement.
MinimizeResult minimize_scalarized(const FuzzyFunction& f, std::span<const double> x_init,
                                   const MinimizeOptions& options = {});

}  // namespace fno
