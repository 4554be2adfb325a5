#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "lgpkit/errors.hpp"

namespace lgpkit::detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::uint64_t parse_uint(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
    throw InputError(std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

inline double parse_double(std::string_view s, const char* what) {
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
    throw InputError(std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

/// Shortest representation that round-trips.
inline std::string format_double(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc{} ? p : buf);
}

} // namespace lgpkit::detail
