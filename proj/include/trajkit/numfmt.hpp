#pragma once

#include <charconv>
#include <string>

namespace trajkit {

/// Shortest decimal form that parses back to the same double. Keeps text
/// outputs (CSV, history files) byte-stable across runs.
inline std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace trajkit
