#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace nmls::detail {

// Shortest decimal form that parses back to the same double.
inline std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace nmls::detail
