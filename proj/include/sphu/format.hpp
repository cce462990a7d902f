#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

namespace sphu {

/// Shortest decimal string that round-trips to the same double.
inline std::string format_shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

/// Fixed 17 significant digits, the width used for every CSV number.
inline std::string format_17g(double x) {
  if (std::isnan(x)) {
    return "nan";
  }
  char buf[64];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(len));
}

}  // namespace sphu
