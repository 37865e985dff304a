#pragma once

// Fuzzy n-cell numbers sampled on a finite grid of membership levels.
//
// A fuzzy n-cell number u is stored through its level sets
//   [u]^r = [lo_1(r), hi_1(r)] x ... x [lo_n(r), hi_n(r)]
// at every level r_k of a shared LevelGrid. Legal numbers have lo_i
// nondecreasing in r, hi_i nonincreasing in r and lo_i(1) <= hi_i(1); all of
// these are checked with the absolute tolerance kOrderTolerance.
//
// Binary operations demand the *same* grid object. Moving a number onto a
// different grid is an explicit call to resample().

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fno/error.hpp"

namespace fno {

inline constexpr double kOrderTolerance = 1e-9;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

Interval operator+(Interval a, Interval b);
Interval operator*(double k, Interval a);

/// Generalized Hukuhara difference of two intervals: the interval w with
/// a = b + w or b = a + (-1)w.
Interval gh_diff(Interval a, Interval b);

class LevelGrid {
 public:
  /// `count` uniformly spaced levels 0, 1/(count-1), ..., 1.
  static std::shared_ptr<const LevelGrid> uniform(std::size_t count = 101);
  /// Strictly increasing levels starting at exactly 0 and ending at exactly 1.
  static std::shared_ptr<const LevelGrid> from_levels(std::vector<double> levels);

  std::size_t size() const noexcept { return levels_.size(); }
  double operator[](std::size_t k) const { return levels_[k]; }
  std::span<const double> levels() const noexcept { return levels_; }

 private:
  explicit LevelGrid(std::vector<double> levels) : levels_(std::move(levels)) {}
  std::vector<double> levels_;
};

using GridPtr = std::shared_ptr<const LevelGrid>;

/// One level set: a product of closed intervals.
using LevelBox = std::vector<Interval>;

enum class Endpoint { Lower, Upper };

std::string_view to_string(Endpoint side);

class FuzzyNCell {
 public:
  /// Builds a number from row-major endpoint arrays (index cell * L + level)
  /// and checks the level-set conditions. A violation beyond `tol` raises an
  /// Error of kind `failure`; values within tolerance are kept as given.
  static FuzzyNCell from_endpoints(GridPtr grid, std::size_t cells,
                                   std::vector<double> lo,
                                   std::vector<double> hi,
                                   ErrorKind failure = ErrorKind::InvalidLevelSets,
                                   double tol = kOrderTolerance);

  const GridPtr& grid() const noexcept { return grid_; }
  std::size_t cells() const noexcept { return cells_; }
  std::size_t levels() const noexcept { return grid_->size(); }

  double lo(std::size_t cell, std::size_t level) const {
    return lo_[cell * levels() + level];
  }
  double hi(std::size_t cell, std::size_t level) const {
    return hi_[cell * levels() + level];
  }
  Interval interval(std::size_t cell, std::size_t level) const {
    return {lo(cell, level), hi(cell, level)};
  }
  std::span<const double> lower(std::size_t cell) const {
    return std::span<const double>(lo_).subspan(cell * levels(), levels());
  }
  std::span<const double> upper(std::size_t cell) const {
    return std::span<const double>(hi_).subspan(cell * levels(), levels());
  }
  const std::vector<double>& lower_data() const noexcept { return lo_; }
  const std::vector<double>& upper_data() const noexcept { return hi_; }

  LevelBox level_box(std::size_t level) const;

  /// Endpoint-wise equality of two numbers on the same grid.
  friend bool operator==(const FuzzyNCell& a, const FuzzyNCell& b);

 private:
  FuzzyNCell(GridPtr grid, std::size_t cells, std::vector<double> lo,
             std::vector<double> hi)
      : grid_(std::move(grid)), cells_(cells), lo_(std::move(lo)),
        hi_(std::move(hi)) {}

  GridPtr grid_;
  std::size_t cells_ = 0;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

/// Describes the first failed level-set condition, or nullopt when the
/// endpoint arrays form a legal fuzzy n-cell number.
std::optional<std::string> check_level_sets(const LevelGrid& grid,
                                            std::size_t cells,
                                            std::span<const double> lo,
                                            std::span<const double> hi,
                                            double tol = kOrderTolerance);

FuzzyNCell make_crisp(std::span<const double> point, GridPtr grid);
FuzzyNCell make_zero(std::size_t cells, GridPtr grid);
/// Triangular number (l, c, u): [l + (c-l) r, u - (u-c) r].
FuzzyNCell make_triangular(double l, double c, double u, GridPtr grid);

FuzzyNCell add(const FuzzyNCell& u, const FuzzyNCell& v);
FuzzyNCell scale(double k, const FuzzyNCell& u);
/// Levelwise product: min/max over the four endpoint products.
FuzzyNCell mul(const FuzzyNCell& u, const FuzzyNCell& v);

inline FuzzyNCell operator+(const FuzzyNCell& u, const FuzzyNCell& v) { return add(u, v); }
inline FuzzyNCell operator*(double k, const FuzzyNCell& u) { return scale(k, u); }
inline FuzzyNCell operator-(const FuzzyNCell& u) { return scale(-1.0, u); }

/// d_L: largest endpoint deviation between two boxes.
double box_distance(const LevelBox& a, const LevelBox& b);
/// D_L: sup over grid levels of box_distance.
double distance(const FuzzyNCell& u, const FuzzyNCell& v);

enum class Relation { LE, GE, EQ, Incomparable };

std::string_view to_string(Relation relation);

struct OrderWitness {
  std::size_t cell = 0;
  std::size_t level = 0;
  Endpoint side = Endpoint::Lower;
};

/// Outcome of the endpoint-wise partial order. `not_le` is the first place
/// (cell-major, then level, lower before upper) where u <= v fails; `not_ge`
/// the same for u >= v.
struct OrderResult {
  Relation relation = Relation::EQ;
  std::optional<OrderWitness> not_le;
  std::optional<OrderWitness> not_ge;

  bool le() const noexcept { return !not_le; }
  bool ge() const noexcept { return !not_ge; }
};

OrderResult order(const FuzzyNCell& u, const FuzzyNCell& v,
                  double tol = kOrderTolerance);

/// Width hi - lo of cell `cell` at level index `level`.
double level_length(const FuzzyNCell& u, std::size_t cell, std::size_t level);

/// g-difference u (-)_g v. Every level takes the suffix infimum/supremum over
/// the levelwise gH-differences at all levels above it.
FuzzyNCell g_diff(const FuzzyNCell& u, const FuzzyNCell& v);

/// Linear interpolation of every endpoint curve onto another grid.
FuzzyNCell resample(const FuzzyNCell& u, GridPtr target);

/// CSV rows "r,i,lo,hi" (0-based cell index) with a header line. Values are
/// printed in shortest round-trip form.
std::string to_csv(const FuzzyNCell& u);
FuzzyNCell from_csv(std::string_view text, GridPtr grid);

/// An m-tuple of fuzzy n-cell numbers sharing one grid and one n.
class FuzzyVector {
 public:
  FuzzyVector() = default;
  explicit FuzzyVector(std::vector<FuzzyNCell> components);

  static FuzzyVector zeros(std::size_t m, std::size_t cells, GridPtr grid);

  std::size_t size() const noexcept { return components_.size(); }
  const FuzzyNCell& operator[](std::size_t j) const { return components_[j]; }
  const std::vector<FuzzyNCell>& components() const noexcept { return components_; }

 private:
  std::vector<FuzzyNCell> components_;
};

FuzzyVector add(const FuzzyVector& a, const FuzzyVector& b);
FuzzyVector scale(double k, const FuzzyVector& v);

/// t . v = sum_j t_j v_j.
FuzzyNCell dot_real(const FuzzyVector& v, std::span<const double> t);

void require_same_grid(const FuzzyNCell& u, const FuzzyNCell& v);

}  // namespace fno
