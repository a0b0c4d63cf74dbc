#pragma once

#include <cstdio>
#include <string>

namespace faslab::detail {

// Fixed CSV number format so identical runs emit identical bytes.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string fmt(long long v) { return std::to_string(v); }
inline std::string fmt(int v) { return std::to_string(v); }

}  // namespace faslab::detail
