#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>

namespace tlopt::detail {

/// Shortest representation that parses back to the same double. Locale-free.
inline std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc() ? end : buf);
}

/// Strict: the whole string must be a decimal floating-point literal.
inline std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  const char* first = text.data();
  const char* last = first + text.size();
  if (*first == '+') ++first;
  double value = 0.0;
  auto [end, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || end != last) return std::nullopt;
  return value;
}

}  // namespace tlopt::detail
