#pragma once

// Sample-based subgradient checks. v is a subgradient of F at t when
//   F(z) (-)_g F(t) >= v . (z - t)   for every z in the domain;
// here "every z" is replaced by a finite sample set Z.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fno/certificate.hpp"
#include "fno/funcspace.hpp"
#include "fno/sampling.hpp"

namespace fno {

Certificate verify_subgradient(const FuzzyFunction& f, std::span<const double> t,
                               const FuzzyVector& v, std::span<const Point> samples);

/// Per-level bounds on the endpoints of every 1-D subgradient, derived from
/// the samples on both sides of t. Index is cell * L + level.
struct SubdiffBox1D {
  GridPtr grid;
  std::size_t cells = 0;
  std::vector<double> vlo_min, vlo_max, vhi_min, vhi_max;
  /// Every per-level interval is nonempty.
  bool nonempty = true;
  /// Some legal fuzzy number fits inside the bounds.
  bool has_legal_member = true;
  /// Samples existed on one side only; the missing bounds are infinite.
  bool half_bounded = false;
  std::size_t samples_used = 0;

  /// Bounds-wise membership of a 1-cell-per-entry candidate.
  bool contains(const FuzzyNCell& v, double tol = kOrderTolerance) const;
  /// The smallest legal member: lower endpoint is the running max of vlo_min
  /// from r = 0 upward, upper endpoint the running min of vhi_max. nullopt
  /// when the box holds no legal number or is half bounded.
  std::optional<FuzzyNCell> legal_member() const;
};

/// Throws EmptySampleSide when the samples leave one side of t empty unless
/// `allow_half_bounded` is set.
SubdiffBox1D subdiff_box_1d(const FuzzyFunction& f, double t, std::span<const Point> samples,
                            bool allow_half_bounded = false);

/// Rows "r,cell,vlo_min,vlo_max,vhi_min,vhi_max".
std::string to_csv(const SubdiffBox1D& box);

/// Requires v in dF(t) on the samples, then checks l v in d(l F)(t).
Certificate subdiff_scale_check(const FuzzyFunction& f, std::span<const double> t,
                                const FuzzyVector& v, double lambda,
                                std::span<const Point> samples);

/// Requires vF in dF(t) and vG in dG(t), then checks vF + vG in d(F+G)(t).
/// Inconclusive when some sample breaks the length ordering under which the
/// g-difference of a sum splits into the sum of g-differences.
Certificate subdiff_sum_check(const FuzzyFunction& f, const FuzzyFunction& g,
                              std::span<const double> t, const FuzzyVector& vf,
                              const FuzzyVector& vg, std::span<const Point> samples);

/// Requires v1, v2 in dF(t), then checks l v1 + (1-l) v2 in dF(t).
Certificate subdiff_convexity_check(const FuzzyFunction& f, std::span<const double> t,
                                    const FuzzyVector& v1, const FuzzyVector& v2, double lambda,
                                    std::span<const Point> samples);

}  // namespace fno
