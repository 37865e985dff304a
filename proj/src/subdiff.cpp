#include "fno/subdiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "format.hpp"

namespace fno {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_candidate(const FuzzyFunction& f, std::span<const double> t, const FuzzyVector& v) {
  if (t.size() != f.domain_dim()) throw Error(ErrorKind::DimensionMismatch, "point has the wrong dimension");
  if (v.size() != f.domain_dim())
    throw Error(ErrorKind::DimensionMismatch, "candidate needs one component per coordinate");
  for (const auto& c : v.components()) {
    if (c.grid() != f.grid()) throw Error(ErrorKind::GridMismatch, "candidate lives on a different grid");
    if (c.cells() != f.cell_dim()) throw Error(ErrorKind::DimensionMismatch, "candidate has the wrong cell count");
  }
}

double endpoint(const FuzzyNCell& u, const OrderWitness& w) {
  return w.side == Endpoint::Lower ? u.lo(w.cell, w.level) : u.hi(w.cell, w.level);
}

void require_verified(const Certificate& c, const char* what) {
  if (!c.verified()) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + " is not a verified subgradient on the samples");
  }
}

// The g-difference of a sum splits into the sum of g-differences when, in
// every cell and level, both length differences have the same sign.
bool lengths_ordered(const FuzzyNCell& a, const FuzzyNCell& c, const FuzzyNCell& b,
                     const FuzzyNCell& d) {
  for (std::size_t i = 0; i < a.cells(); ++i) {
    for (std::size_t k = 0; k < a.levels(); ++k) {
      const double da = level_length(a, i, k) - level_length(c, i, k);
      const double db = level_length(b, i, k) - level_length(d, i, k);
      const bool grow = da >= -kOrderTolerance && db >= -kOrderTolerance;
      const bool shrink = da <= kOrderTolerance && db <= kOrderTolerance;
      if (!grow && !shrink) return false;
    }
  }
  return true;
}

}  // namespace

Certificate verify_subgradient(const FuzzyFunction& f, std::span<const double> t,
                               const FuzzyVector& v, std::span<const Point> samples) {
  require_candidate(f, t, v);
  if (samples.empty()) throw Error(ErrorKind::InvalidInput, "subgradient check needs at least one sample");

  Certificate cert;
  cert.check = "F(z) (-)g F(t) >= v.(z - t)";
  const FuzzyNCell ft = eval_function(f, t);
  std::vector<double> step(t.size());
  std::optional<Witness> undecided;
  for (const auto& z : samples) {
    const FuzzyNCell fz = eval_function(f, z);
    ++cert.samples_used;
    std::optional<FuzzyNCell> diff;
    try {
      diff = g_diff(fz, ft);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotRepresentable) throw;
      if (!undecided) {
        undecided = Witness{};
        undecided->point = z;
        undecided->reason = std::string("g-difference does not exist: ") + e.what();
      }
      continue;
    }
    for (std::size_t j = 0; j < t.size(); ++j) step[j] = z[j] - t[j];
    const FuzzyNCell rhs = dot_real(v, step);
    const OrderResult ord = order(*diff, rhs);
    if (!ord.ge()) {
      Witness w;
      w.point = z;
      w.violation = ord.not_ge;
      w.lhs = endpoint(*diff, *ord.not_ge);
      w.rhs = endpoint(rhs, *ord.not_ge);
      w.reason = "g-difference falls below v.(z - t)";
      cert.status = Status::Refuted;
      cert.witness = std::move(w);
      return cert;
    }
  }
  if (undecided) {
    cert.status = Status::Inconclusive;
    cert.witness = std::move(undecided);
  }
  return cert;
}

bool SubdiffBox1D::contains(const FuzzyNCell& v, double tol) const {
  if (v.grid() != grid || v.cells() != cells) return false;
  const std::size_t L = grid->size();
  for (std::size_t x = 0; x < cells * L; ++x) {
    const double lo = v.lower_data()[x];
    const double hi = v.upper_data()[x];
    if (lo < vlo_min[x] - tol || lo > vlo_max[x] + tol) return false;
    if (hi < vhi_min[x] - tol || hi > vhi_max[x] + tol) return false;
  }
  return true;
}

std::optional<FuzzyNCell> SubdiffBox1D::legal_member() const {
  if (!has_legal_member || half_bounded) return std::nullopt;
  const std::size_t L = grid->size();
  std::vector<double> lo(cells * L), hi(cells * L);
  for (std::size_t i = 0; i < cells; ++i) {
    double a = -kInf, b = kInf;
    for (std::size_t k = 0; k < L; ++k) {
      const std::size_t x = i * L + k;
      a = std::max(a, vlo_min[x]);
      b = std::min(b, vhi_max[x]);
      lo[x] = a;
      hi[x] = b;
    }
  }
  return FuzzyNCell::from_endpoints(grid, cells, std::move(lo), std::move(hi));
}

SubdiffBox1D subdiff_box_1d(const FuzzyFunction& f, double t, std::span<const Point> samples,
                            bool allow_half_bounded) {
  if (f.domain_dim() != 1) {
    throw Error(ErrorKind::DimensionMismatch, "subdifferential boxes are one-dimensional only");
  }
  const std::size_t L = f.grid()->size();
  const std::size_t size = f.cell_dim() * L;
  SubdiffBox1D box;
  box.grid = f.grid();
  box.cells = f.cell_dim();
  box.vlo_min.assign(size, -kInf);
  box.vhi_min.assign(size, -kInf);
  box.vlo_max.assign(size, kInf);
  box.vhi_max.assign(size, kInf);

  const double tp[1] = {t};
  const FuzzyNCell ft = eval_function(f, tp);
  bool right = false, left = false;
  for (const auto& z : samples) {
    if (z.size() != 1) throw Error(ErrorKind::DimensionMismatch, "sample has the wrong dimension");
    const double s = z[0] - t;
    if (s == 0.0) continue;
    const FuzzyNCell diff = g_diff(eval_function(f, z), ft);
    ++box.samples_used;
    const auto& dlo = diff.lower_data();
    const auto& dhi = diff.upper_data();
    if (s > 0.0) {
      right = true;
      for (std::size_t x = 0; x < size; ++x) {
        box.vlo_max[x] = std::min(box.vlo_max[x], dlo[x] / s);
        box.vhi_max[x] = std::min(box.vhi_max[x], dhi[x] / s);
      }
    } else {
      // Dividing by a negative step flips which endpoint bounds which.
      left = true;
      for (std::size_t x = 0; x < size; ++x) {
        box.vlo_min[x] = std::max(box.vlo_min[x], dhi[x] / s);
        box.vhi_min[x] = std::max(box.vhi_min[x], dlo[x] / s);
      }
    }
  }
  if (!right || !left) {
    if (!right && !left) throw Error(ErrorKind::EmptySampleSide, "no sample differs from t");
    if (!allow_half_bounded) {
      throw Error(ErrorKind::EmptySampleSide, std::string("no samples ") +
                                                  (right ? "below" : "above") + " t = " +
                                                  detail::format_double(t));
    }
    box.half_bounded = true;
  }

  for (std::size_t x = 0; x < size; ++x) {
    if (box.vlo_min[x] > box.vlo_max[x] + kOrderTolerance ||
        box.vhi_min[x] > box.vhi_max[x] + kOrderTolerance)
      box.nonempty = false;
  }
  for (std::size_t i = 0; i < box.cells && box.has_legal_member; ++i) {
    double a = -kInf, b = kInf;
    for (std::size_t k = 0; k < L; ++k) {
      const std::size_t x = i * L + k;
      a = std::max(a, box.vlo_min[x]);
      b = std::min(b, box.vhi_max[x]);
      if (a > box.vlo_max[x] + kOrderTolerance || b < box.vhi_min[x] - kOrderTolerance) {
        box.has_legal_member = false;
        break;
      }
    }
    if (a > b + kOrderTolerance) box.has_legal_member = false;
  }
  if (!box.nonempty) box.has_legal_member = false;
  return box;
}

std::string to_csv(const SubdiffBox1D& box) {
  using detail::format_double;
  std::string out = "r,cell,vlo_min,vlo_max,vhi_min,vhi_max\n";
  const std::size_t L = box.grid->size();
  for (std::size_t i = 0; i < box.cells; ++i) {
    for (std::size_t k = 0; k < L; ++k) {
      const std::size_t x = i * L + k;
      out += format_double((*box.grid)[k]) + ',' + std::to_string(i) + ',' +
             format_double(box.vlo_min[x]) + ',' + format_double(box.vlo_max[x]) + ',' +
             format_double(box.vhi_min[x]) + ',' + format_double(box.vhi_max[x]) + '\n';
    }
  }
  return out;
}

Certificate subdiff_scale_check(const FuzzyFunction& f, std::span<const double> t,
                                const FuzzyVector& v, double lambda,
                                std::span<const Point> samples) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidInput, "scale factor must be positive");
  require_verified(verify_subgradient(f, t, v, samples), "v");
  Certificate cert = verify_subgradient(scale(lambda, f), t, scale(lambda, v), samples);
  cert.check = "l v in d(l F)(t)";
  return cert;
}

Certificate subdiff_sum_check(const FuzzyFunction& f, const FuzzyFunction& g,
                              std::span<const double> t, const FuzzyVector& vf,
                              const FuzzyVector& vg, std::span<const Point> samples) {
  require_verified(verify_subgradient(f, t, vf, samples), "vF");
  require_verified(verify_subgradient(g, t, vg, samples), "vG");
  const FuzzyFunction h = add(f, g);
  const FuzzyNCell ft = eval_function(f, t);
  const FuzzyNCell gt = eval_function(g, t);
  for (std::size_t q = 0; q < samples.size(); ++q) {
    const auto& z = samples[q];
    if (!lengths_ordered(eval_function(f, z), ft, eval_function(g, z), gt)) {
      Certificate cert;
      cert.status = Status::Inconclusive;
      cert.samples_used = q + 1;
      cert.check = "vF + vG in d(F+G)(t)";
      Witness w;
      w.point = z;
      w.reason = "level lengths of F and G change in opposite directions; the sum rule does not apply";
      cert.witness = std::move(w);
      return cert;
    }
  }
  Certificate cert = verify_subgradient(h, t, add(vf, vg), samples);
  cert.check = "vF + vG in d(F+G)(t)";
  return cert;
}

Certificate subdiff_convexity_check(const FuzzyFunction& f, std::span<const double> t,
                                    const FuzzyVector& v1, const FuzzyVector& v2, double lambda,
                                    std::span<const Point> samples) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorKind::InvalidInput, "weight must lie in [0, 1]");
  require_verified(verify_subgradient(f, t, v1, samples), "v1");
  require_verified(verify_subgradient(f, t, v2, samples), "v2");
  Certificate cert =
      verify_subgradient(f, t, add(scale(lambda, v1), scale(1.0 - lambda, v2)), samples);
  cert.check = "l v1 + (1-l) v2 in dF(t)";
  return cert;
}

}  // namespace fno
