#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace newsgraph {

// Shortest decimal string that parses back to exactly the same double.
// Keeps text artifacts byte-stable across runs without dragging 17 digits
// into every value.
inline std::string format_double(double v) {
  for (int prec = 1; prec <= 17; ++prec) {
    char buf[64];
    int n = std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    auto [ptr, ec] = std::from_chars(buf, buf + n, back);
    if (ec == std::errc() && ptr == buf + n && back == v) return std::string(buf, buf + n);
  }
  char buf[64];
  int n = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf, buf + n);
}

}  // namespace newsgraph
