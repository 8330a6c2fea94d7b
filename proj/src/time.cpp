#include "vtdc/time.hpp"

#include <fmt/format.h>

#include <cctype>
#include <cstdlib>

namespace vtdc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::string_view text, std::string_view why) {
  throw ParseError(fmt::format("invalid picosecond value '{}': {}", text, why));
}

}  // namespace

std::int64_t parse_ps_to_fs(std::string_view text) {
  std::string_view s = trim(text);
  if (s.size() >= 2 && s.substr(s.size() - 2) == "ps") s = trim(s.substr(0, s.size() - 2));
  if (s.empty()) fail(text, "empty");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  const auto dot = s.find('.');
  const std::string_view whole = s.substr(0, dot);
  const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);

  if (whole.empty()) fail(text, "missing integer digits");
  if (dot != std::string_view::npos && frac.empty()) fail(text, "missing fractional digits");
  if (frac.size() > 3) fail(text, "more than 3 fractional digits would lose femtosecond precision");

  // Accumulate as a negative number so INT64_MIN stays representable.
  std::int64_t acc = 0;
  auto push_digit = [&](char c) {
    if (c < '0' || c > '9') fail(text, "non-numeric character");
    try {
      acc = detail::checked_sub(detail::checked_mul(acc, 10), c - '0');
    } catch (const OverflowError&) {
      fail(text, "out of int64 femtosecond range");
    }
  };
  for (char c : whole) push_digit(c);
  for (char c : frac) push_digit(c);
  for (std::size_t i = frac.size(); i < 3; ++i) push_digit('0');

  if (negative) return acc;
  if (acc == INT64_MIN) fail(text, "out of int64 femtosecond range");
  return -acc;
}

std::string format_ps(std::int64_t fs) {
  const bool negative = fs < 0;
  // Work in unsigned magnitude; -INT64_MIN does not fit in int64.
  const std::uint64_t mag = negative ? 0 - static_cast<std::uint64_t>(fs) : static_cast<std::uint64_t>(fs);
  const std::uint64_t whole = mag / 1000;
  std::uint64_t frac = mag % 1000;

  std::string out = negative ? "-" : "";
  out += fmt::format("{}", whole);
  if (frac != 0) {
    std::string digits = fmt::format("{:03d}", frac);
    while (digits.back() == '0') digits.pop_back();
    out += '.';
    out += digits;
  }
  return out;
}

}  // namespace vtdc
