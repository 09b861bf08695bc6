#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace rtb {

// Shortest decimal string that round-trips the double; deterministic, so
// repeated runs produce byte-identical artifacts.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace rtb
