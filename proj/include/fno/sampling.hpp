#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fno/funcspace.hpp"

namespace fno {

using Point = std::vector<double>;

struct SampleOptions {
  std::size_t uniform = 64;
  std::size_t clustered = 16;
  double cluster_radius = 1e-3;
  std::uint64_t seed = 0;
};

/// Halton points spread over a finite box followed by antithetic pairs of
/// points within `cluster_radius` of `center` (clipped to the box).
std::vector<Point> default_samples(const DomainBox& box, std::span<const double> center,
                                   const SampleOptions& options = {});

/// Tensor grid with `per_dim` evenly spaced points per coordinate, first
/// coordinate varying slowest.
std::vector<Point> grid_samples(const DomainBox& box, std::size_t per_dim);

}  // namespace fno
