#pragma once
// Number formatting helpers for labels and file output.

#include <cstdio>
#include <string>

namespace icin {

// compact representation for labels ("%g")
inline std::string fmt_compact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// full-precision representation for data files (17 significant digits)
inline std::string fmt_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace icin
