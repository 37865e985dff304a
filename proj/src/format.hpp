#pragma once

#include <span>
#include <string>

namespace fno::detail {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);
/// "(a, b, c)".
std::string format_point(std::span<const double> t);

}  // namespace fno::detail
