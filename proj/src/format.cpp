#include "format.hpp"

#include <charconv>

namespace fno::detail {

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // no "-0" in reports
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string format_point(std::span<const double> t) {
  std::string s = "(";
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (j) s += ", ";
    s += format_double(t[j]);
  }
  return s + ")";
}

}  // namespace fno::detail
