#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace lo1d {

/// Canonical text form of a number: 12 significant digits, shortest of
/// fixed/scientific (printf %.12g), "nan"/"inf"/"-inf" for non-finite values
/// and "0" for negative zero.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace lo1d
