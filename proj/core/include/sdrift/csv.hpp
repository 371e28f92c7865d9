#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace sdrift::csv {

/// Shortest-safe round-trip text for a double: 17 significant digits, '.'
/// decimal separator regardless of locale. Non-finite values print as
/// "nan", "inf", "-inf".
inline std::string real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace sdrift::csv
