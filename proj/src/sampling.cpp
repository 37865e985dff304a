#include "fno/sampling.hpp"

#include <algorithm>
#include <random>

namespace fno {

namespace {

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::size_t index, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double x = 0.0;
  while (index > 0) {
    x += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return x;
}

void require_finite(const DomainBox& box) {
  if (!box.is_finite()) {
    throw Error(ErrorKind::DomainViolation, "sampling needs a finite domain box");
  }
}

}  // namespace

std::vector<Point> default_samples(const DomainBox& box, std::span<const double> center,
                                   const SampleOptions& options) {
  require_finite(box);
  const std::size_t m = box.size();
  if (m > std::size(kPrimes)) throw Error(ErrorKind::InvalidInput, "too many dimensions for Halton sampling");
  if (center.size() != m) throw Error(ErrorKind::DimensionMismatch, "sample center has the wrong dimension");

  std::vector<Point> out;
  out.reserve(options.uniform + options.clustered);
  for (std::size_t q = 0; q < options.uniform; ++q) {
    Point p(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double u = radical_inverse(q + 1, kPrimes[j]);
      p[j] = box[j].lo + u * (box[j].hi - box[j].lo);
    }
    out.push_back(std::move(p));
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Point offset(m);
  for (std::size_t q = 0; q < options.clustered; ++q) {
    if (q % 2 == 0) {
      for (auto& o : offset) o = options.cluster_radius * unit(rng);
    } else {
      for (auto& o : offset) o = -o;
    }
    Point p(m);
    for (std::size_t j = 0; j < m; ++j) {
      p[j] = std::clamp(center[j] + offset[j], box[j].lo, box[j].hi);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Point> grid_samples(const DomainBox& box, std::size_t per_dim) {
  require_finite(box);
  if (per_dim == 0) throw Error(ErrorKind::InvalidInput, "grid needs at least one point per dimension");
  const std::size_t m = box.size();
  std::size_t total = 1;
  for (std::size_t j = 0; j < m; ++j) total *= per_dim;
  std::vector<Point> out;
  out.reserve(total);
  std::vector<std::size_t> idx(m, 0);
  for (std::size_t q = 0; q < total; ++q) {
    Point p(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double u = per_dim == 1 ? 0.5 : static_cast<double>(idx[j]) / static_cast<double>(per_dim - 1);
      p[j] = per_dim == 1 ? box[j].lo + u * (box[j].hi - box[j].lo)
                          : (idx[j] + 1 == per_dim ? box[j].hi : box[j].lo + u * (box[j].hi - box[j].lo));
    }
    out.push_back(std::move(p));
    for (std::size_t j = m; j-- > 0;) {
      if (++idx[j] < per_dim) break;
      idx[j] = 0;
    }
  }
  return out;
}

}  // namespace fno
