#pragma once

#include <charconv>
#include <string>

namespace singtrace::detail {

/// Shortest round-trip decimal form, used in labels ("power:0.5").
inline std::string short_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace singtrace::detail
