#include "fno/levelsets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "format.hpp"

namespace fno {

namespace {

using detail::format_double;

FuzzyNCell build_checked(GridPtr grid, std::size_t cells, std::vector<double> lo,
                         std::vector<double> hi, ErrorKind failure) {
  return FuzzyNCell::from_endpoints(std::move(grid), cells, std::move(lo),
                                    std::move(hi), failure);
}

}  // namespace

Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }

Interval operator*(double k, Interval a) {
  if (k >= 0.0) return {k * a.lo, k * a.hi};
  return {k * a.hi, k * a.lo};
}

Interval gh_diff(Interval a, Interval b) {
  const double dl = a.lo - b.lo;
  const double dh = a.hi - b.hi;
  return {std::min(dl, dh), std::max(dl, dh)};
}

std::shared_ptr<const LevelGrid> LevelGrid::uniform(std::size_t count) {
  if (count < 2) throw Error(ErrorKind::InvalidInput, "a level grid needs at least 2 levels");
  std::vector<double> levels(count);
  const double last = static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) levels[k] = static_cast<double>(k) / last;
  levels.front() = 0.0;
  levels.back() = 1.0;
  return std::shared_ptr<const LevelGrid>(new LevelGrid(std::move(levels)));
}

std::shared_ptr<const LevelGrid> LevelGrid::from_levels(std::vector<double> levels) {
  if (levels.size() < 2) throw Error(ErrorKind::InvalidInput, "a level grid needs at least 2 levels");
  if (levels.front() != 0.0 || levels.back() != 1.0)
    throw Error(ErrorKind::InvalidInput, "level grid must start at 0 and end at 1");
  for (std::size_t k = 1; k < levels.size(); ++k) {
    if (!(levels[k] > levels[k - 1]))
      throw Error(ErrorKind::InvalidInput, "level grid must be strictly increasing");
  }
  return std::shared_ptr<const LevelGrid>(new LevelGrid(std::move(levels)));
}

std::string_view to_string(Endpoint side) {
  return side == Endpoint::Lower ? "lower" : "upper";
}

std::string_view to_string(Relation relation) {
  switch (relation) {
    case Relation::LE: return "LE";
    case Relation::GE: return "GE";
    case Relation::EQ: return "EQ";
    case Relation::Incomparable: return "INCOMPARABLE";
  }
  return "?";
}

std::optional<std::string> check_level_sets(const LevelGrid& grid, std::size_t cells,
                                            std::span<const double> lo,
                                            std::span<const double> hi, double tol) {
  const std::size_t L = grid.size();
  if (lo.size() != cells * L || hi.size() != cells * L) {
    return "endpoint arrays have the wrong length";
  }
  for (std::size_t i = 0; i < cells; ++i) {
    const auto* a = lo.data() + i * L;
    const auto* b = hi.data() + i * L;
    for (std::size_t k = 0; k < L; ++k) {
      if (!std::isfinite(a[k]) || !std::isfinite(b[k])) {
        return "non-finite endpoint in cell " + std::to_string(i) + " at r=" +
               format_double(grid[k]);
      }
      if (k > 0 && a[k] < a[k - 1] - tol) {
        return "lower endpoint of cell " + std::to_string(i) +
               " decreases at r=" + format_double(grid[k]);
      }
      if (k > 0 && b[k] > b[k - 1] + tol) {
        return "upper endpoint of cell " + std::to_string(i) +
               " increases at r=" + format_double(grid[k]);
      }
    }
    if (a[L - 1] > b[L - 1] + tol) {
      return "lower endpoint exceeds upper endpoint of cell " + std::to_string(i) +
             " at r=1";
    }
  }
  return std::nullopt;
}

FuzzyNCell FuzzyNCell::from_endpoints(GridPtr grid, std::size_t cells, std::vector<double> lo,
                                      std::vector<double> hi, ErrorKind failure, double tol) {
  if (!grid) throw Error(ErrorKind::InvalidInput, "missing level grid");
  if (cells == 0) throw Error(ErrorKind::DimensionMismatch, "a fuzzy number needs at least one cell");
  if (auto problem = check_level_sets(*grid, cells, lo, hi, tol)) {
    throw Error(failure, *problem);
  }
  return FuzzyNCell(std::move(grid), cells, std::move(lo), std::move(hi));
}

LevelBox FuzzyNCell::level_box(std::size_t level) const {
  if (level >= levels()) throw Error(ErrorKind::IndexOutOfRange, "level index out of range");
  LevelBox box(cells_);
  for (std::size_t i = 0; i < cells_; ++i) box[i] = interval(i, level);
  return box;
}

bool operator==(const FuzzyNCell& a, const FuzzyNCell& b) {
  return a.grid_ == b.grid_ && a.cells_ == b.cells_ && a.lo_ == b.lo_ && a.hi_ == b.hi_;
}

void require_same_grid(const FuzzyNCell& u, const FuzzyNCell& v) {
  if (u.grid() != v.grid()) {
    throw Error(ErrorKind::GridMismatch, "operands live on different level grids");
  }
  if (u.cells() != v.cells()) {
    throw Error(ErrorKind::GridMismatch, "operands have different cell counts (" +
                                             std::to_string(u.cells()) + " vs " +
                                             std::to_string(v.cells()) + ")");
  }
}

FuzzyNCell make_crisp(std::span<const double> point, GridPtr grid) {
  if (!grid) throw Error(ErrorKind::InvalidInput, "missing level grid");
  const std::size_t L = grid->size();
  std::vector<double> lo(point.size() * L);
  for (std::size_t i = 0; i < point.size(); ++i) {
    std::fill_n(lo.begin() + static_cast<std::ptrdiff_t>(i * L), L, point[i]);
  }
  std::vector<double> hi = lo;
  return build_checked(std::move(grid), point.size(), std::move(lo), std::move(hi),
                       ErrorKind::InvalidInput);
}

FuzzyNCell make_zero(std::size_t cells, GridPtr grid) {
  std::vector<double> zeros(cells, 0.0);
  return make_crisp(zeros, std::move(grid));
}

FuzzyNCell make_triangular(double l, double c, double u, GridPtr grid) {
  if (!(l <= c && c <= u)) {
    throw Error(ErrorKind::OrderViolation, "triangular number needs l <= c <= u, got (" +
                                               format_double(l) + ", " + format_double(c) +
                                               ", " + format_double(u) + ")");
  }
  const std::size_t L = grid->size();
  std::vector<double> lo(L), hi(L);
  for (std::size_t k = 0; k < L; ++k) {
    const double r = (*grid)[k];
    lo[k] = l + (c - l) * r;
    hi[k] = u - (u - c) * r;
  }
  return build_checked(std::move(grid), 1, std::move(lo), std::move(hi), ErrorKind::OrderViolation);
}

FuzzyNCell add(const FuzzyNCell& u, const FuzzyNCell& v) {
  require_same_grid(u, v);
  std::vector<double> lo(u.lower_data()), hi(u.upper_data());
  for (std::size_t x = 0; x < lo.size(); ++x) {
    lo[x] += v.lower_data()[x];
    hi[x] += v.upper_data()[x];
  }
  return build_checked(u.grid(), u.cells(), std::move(lo), std::move(hi),
                       ErrorKind::NotRepresentable);
}

FuzzyNCell scale(double k, const FuzzyNCell& u) {
  std::vector<double> lo(u.lower_data().size()), hi(lo.size());
  const auto& a = u.lower_data();
  const auto& b = u.upper_data();
  for (std::size_t x = 0; x < lo.size(); ++x) {
    if (k >= 0.0) {
      lo[x] = k * a[x];
      hi[x] = k * b[x];
    } else {
      lo[x] = k * b[x];
      hi[x] = k * a[x];
    }
  }
  return build_checked(u.grid(), u.cells(), std::move(lo), std::move(hi),
                       ErrorKind::NotRepresentable);
}

FuzzyNCell mul(const FuzzyNCell& u, const FuzzyNCell& v) {
  require_same_grid(u, v);
  const std::size_t L = u.levels();
  const std::size_t n = u.cells();
  std::vector<double> lo(n * L), hi(n * L);
  for (std::size_t x = 0; x < lo.size(); ++x) {
    const double a = u.lower_data()[x], b = u.upper_data()[x];
    const double c = v.lower_data()[x], d = v.upper_data()[x];
    const double p[4] = {a * c, a * d, b * c, b * d};
    lo[x] = *std::min_element(p, p + 4);
    hi[x] = *std::max_element(p, p + 4);
  }
  // Rounding can break monotonicity by a few ulps; anything larger is a
  // genuine defect and is reported instead of repaired.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 1; k < L; ++k) {
      double& a = lo[i * L + k];
      double& b = hi[i * L + k];
      const double pa = lo[i * L + k - 1];
      const double pb = hi[i * L + k - 1];
      if (a < pa) {
        if (a < pa - kOrderTolerance)
          throw Error(ErrorKind::MonotonicityViolation, "product lower endpoint decreases");
        a = pa;
      }
      if (b > pb) {
        if (b > pb + kOrderTolerance)
          throw Error(ErrorKind::MonotonicityViolation, "product upper endpoint increases");
        b = pb;
      }
    }
  }
  return build_checked(u.grid(), n, std::move(lo), std::move(hi),
                       ErrorKind::MonotonicityViolation);
}

double box_distance(const LevelBox& a, const LevelBox& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch, "boxes have different dimensions");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max({d, std::abs(a[i].lo - b[i].lo), std::abs(a[i].hi - b[i].hi)});
  }
  return d;
}

double distance(const FuzzyNCell& u, const FuzzyNCell& v) {
  require_same_grid(u, v);
  double d = 0.0;
  const auto& a = u.lower_data();
  const auto& b = u.upper_data();
  const auto& c = v.lower_data();
  const auto& e = v.upper_data();
  for (std::size_t x = 0; x < a.size(); ++x) {
    d = std::max({d, std::abs(a[x] - c[x]), std::abs(b[x] - e[x])});
  }
  return d;
}

OrderResult order(const FuzzyNCell& u, const FuzzyNCell& v, double tol) {
  require_same_grid(u, v);
  OrderResult result;
  const std::size_t L = u.levels();
  for (std::size_t i = 0; i < u.cells() && !(result.not_le && result.not_ge); ++i) {
    for (std::size_t k = 0; k < L; ++k) {
      const double ul = u.lo(i, k), uh = u.hi(i, k);
      const double vl = v.lo(i, k), vh = v.hi(i, k);
      if (!result.not_le) {
        if (ul > vl + tol) result.not_le = OrderWitness{i, k, Endpoint::Lower};
        else if (uh > vh + tol) result.not_le = OrderWitness{i, k, Endpoint::Upper};
      }
      if (!result.not_ge) {
        if (ul < vl - tol) result.not_ge = OrderWitness{i, k, Endpoint::Lower};
        else if (uh < vh - tol) result.not_ge = OrderWitness{i, k, Endpoint::Upper};
      }
    }
  }
  if (result.le() && result.ge()) result.relation = Relation::EQ;
  else if (result.le()) result.relation = Relation::LE;
  else if (result.ge()) result.relation = Relation::GE;
  else result.relation = Relation::Incomparable;
  return result;
}

double level_length(const FuzzyNCell& u, std::size_t cell, std::size_t level) {
  if (cell >= u.cells() || level >= u.levels()) {
    throw Error(ErrorKind::IndexOutOfRange, "level_length index out of range");
  }
  return u.hi(cell, level) - u.lo(cell, level);
}

FuzzyNCell g_diff(const FuzzyNCell& u, const FuzzyNCell& v) {
  require_same_grid(u, v);
  const std::size_t L = u.levels();
  const std::size_t n = u.cells();
  std::vector<double> lo(n * L), hi(n * L);
  for (std::size_t i = 0; i < n; ++i) {
    double running_min = INFINITY;
    double running_max = -INFINITY;
    for (std::size_t k = L; k-- > 0;) {
      const Interval w = gh_diff(u.interval(i, k), v.interval(i, k));
      running_min = std::min(running_min, w.lo);
      running_max = std::max(running_max, w.hi);
      lo[i * L + k] = running_min;
      hi[i * L + k] = running_max;
    }
  }
  return build_checked(u.grid(), n, std::move(lo), std::move(hi), ErrorKind::NotRepresentable);
}

FuzzyNCell resample(const FuzzyNCell& u, GridPtr target) {
  const auto& src = *u.grid();
  const std::size_t L = target->size();
  const std::size_t n = u.cells();
  std::vector<double> lo(n * L), hi(n * L);
  for (std::size_t k = 0; k < L; ++k) {
    const double r = (*target)[k];
    auto it = std::upper_bound(src.levels().begin(), src.levels().end(), r);
    std::size_t j = static_cast<std::size_t>(it - src.levels().begin());
    j = std::clamp<std::size_t>(j, 1, src.size() - 1);
    const double r0 = src[j - 1], r1 = src[j];
    const double w = (r - r0) / (r1 - r0);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i * L + k] = (1.0 - w) * u.lo(i, j - 1) + w * u.lo(i, j);
      hi[i * L + k] = (1.0 - w) * u.hi(i, j - 1) + w * u.hi(i, j);
    }
  }
  return build_checked(std::move(target), n, std::move(lo), std::move(hi),
                       ErrorKind::NotRepresentable);
}

std::string to_csv(const FuzzyNCell& u) {
  std::string out = "r,i,lo,hi\n";
  for (std::size_t i = 0; i < u.cells(); ++i) {
    for (std::size_t k = 0; k < u.levels(); ++k) {
      out += format_double((*u.grid())[k]);
      out += ',';
      out += std::to_string(i);
      out += ',';
      out += format_double(u.lo(i, k));
      out += ',';
      out += format_double(u.hi(i, k));
      out += '\n';
    }
  }
  return out;
}

FuzzyNCell from_csv(std::string_view text, GridPtr grid) {
  const std::size_t L = grid->size();
  std::vector<double> lo, hi;
  std::vector<bool> seen;
  std::size_t cells = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line == "r,i,lo,hi") continue;

    double fields[4];
    std::size_t f = 0;
    std::size_t start = 0;
    for (; f < 4; ++f) {
      std::size_t comma = line.find(',', start);
      std::string_view tok = line.substr(start, comma == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : comma - start);
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), fields[f]);
      if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw Error(ErrorKind::InvalidInput, "bad CSV field on line " + std::to_string(line_no));
      if (comma == std::string_view::npos) {
        ++f;
        break;
      }
      start = comma + 1;
    }
    if (f != 4) throw Error(ErrorKind::InvalidInput, "CSV line " + std::to_string(line_no) + " needs 4 fields");

    const double r = fields[0];
    const auto cell = static_cast<std::size_t>(fields[1]);
    auto it = std::lower_bound(grid->levels().begin(), grid->levels().end(), r);
    if (it == grid->levels().end() || *it != r)
      throw Error(ErrorKind::GridMismatch, "CSV level " + format_double(r) + " is not on the grid");
    const auto k = static_cast<std::size_t>(it - grid->levels().begin());
    if (cell + 1 > cells) {
      cells = cell + 1;
      lo.resize(cells * L);
      hi.resize(cells * L);
      seen.resize(cells * L);
    }
    lo[cell * L + k] = fields[2];
    hi[cell * L + k] = fields[3];
    seen[cell * L + k] = true;
  }
  if (cells == 0 || std::find(seen.begin(), seen.end(), false) != seen.end())
    throw Error(ErrorKind::InvalidInput, "CSV does not cover every (cell, level) pair");
  return FuzzyNCell::from_endpoints(std::move(grid), cells, std::move(lo), std::move(hi));
}

FuzzyVector::FuzzyVector(std::vector<FuzzyNCell> components)
    : components_(std::move(components)) {
  for (std::size_t j = 1; j < components_.size(); ++j) {
    require_same_grid(components_[0], components_[j]);
  }
}

FuzzyVector FuzzyVector::zeros(std::size_t m, std::size_t cells, GridPtr grid) {
  std::vector<FuzzyNCell> parts(m, make_zero(cells, std::move(grid)));
  return FuzzyVector(std::move(parts));
}

FuzzyVector add(const FuzzyVector& a, const FuzzyVector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "fuzzy vectors differ in length");
  std::vector<FuzzyNCell> out;
  out.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out.push_back(add(a[j], b[j]));
  return FuzzyVector(std::move(out));
}

FuzzyVector scale(double k, const FuzzyVector& v) {
  std::vector<FuzzyNCell> out;
  out.reserve(v.size());
  for (const auto& c : v.components()) out.push_back(scale(k, c));
  return FuzzyVector(std::move(out));
}

FuzzyNCell dot_real(const FuzzyVector& v, std::span<const double> t) {
  if (v.size() != t.size()) {
    throw Error(ErrorKind::DimensionMismatch, "dot product of a length-" + std::to_string(v.size()) +
                                                  " fuzzy vector with a length-" +
                                                  std::to_string(t.size()) + " real vector");
  }
  if (v.size() == 0) throw Error(ErrorKind::DimensionMismatch, "dot product of empty vectors");
  FuzzyNCell acc = scale(t[0], v[0]);
  for (std::size_t j = 1; j < v.size(); ++j) acc = add(acc, scale(t[j], v[j]));
  return acc;
}

}  // namespace fno
