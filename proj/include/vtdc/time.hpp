#pragma once

// Exact integer femtosecond timebase.
//
// Every instant and interval in the simulator is an int64 count of
// femtoseconds. Arithmetic is checked: overflow throws OverflowError
// instead of wrapping.

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vtdc {

class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("femtosecond addition overflows int64");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("femtosecond subtraction overflows int64");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("femtosecond multiplication overflows int64");
  return r;
}

}  // namespace detail

/// Signed interval in femtoseconds. May be negative (stop before start).
class Duration {
 public:
  constexpr Duration() = default;
  constexpr explicit Duration(std::int64_t fs) : fs_(fs) {}

  constexpr std::int64_t fs() const { return fs_; }
  double ps() const { return static_cast<double>(fs_) * 1e-3; }
  double ns() const { return static_cast<double>(fs_) * 1e-6; }

  static constexpr Duration zero() { return Duration{0}; }

  friend Duration operator+(Duration a, Duration b) { return Duration{detail::checked_add(a.fs_, b.fs_)}; }
  friend Duration operator-(Duration a, Duration b) { return Duration{detail::checked_sub(a.fs_, b.fs_)}; }
  friend Duration operator*(Duration a, std::int64_t k) { return Duration{detail::checked_mul(a.fs_, k)}; }
  friend Duration operator*(std::int64_t k, Duration a) { return a * k; }
  Duration operator-() const { return Duration{detail::checked_sub(0, fs_)}; }
  Duration& operator+=(Duration o) { return *this = *this + o; }
  Duration& operator-=(Duration o) { return *this = *this - o; }

  constexpr auto operator<=>(const Duration&) const = default;

 private:
  std::int64_t fs_ = 0;
};

/// Absolute instant in femtoseconds on the simulation timebase.
class Time {
 public:
  constexpr Time() = default;
  constexpr explicit Time(std::int64_t fs) : fs_(fs) {}

  constexpr std::int64_t fs() const { return fs_; }
  double ps() const { return static_cast<double>(fs_) * 1e-3; }

  friend Time operator+(Time t, Duration d) { return Time{detail::checked_add(t.fs_, d.fs())}; }
  friend Time operator+(Duration d, Time t) { return t + d; }
  friend Time operator-(Time t, Duration d) { return Time{detail::checked_sub(t.fs_, d.fs())}; }
  friend Duration operator-(Time a, Time b) { return Duration{detail::checked_sub(a.fs_, b.fs_)}; }
  Time& operator+=(Duration d) { return *this = *this + d; }

  constexpr auto operator<=>(const Time&) const = default;

 private:
  std::int64_t fs_ = 0;
};

inline constexpr std::int64_t kFsPerPs = 1'000;
inline constexpr std::int64_t kFsPerNs = 1'000'000;

/// Parses "±D[.DDD]" picoseconds (optionally suffixed by "ps") into exact
/// femtoseconds. More than three fractional digits is a ParseError.
std::int64_t parse_ps_to_fs(std::string_view text);

inline Time time_from_ps(std::string_view text) { return Time{parse_ps_to_fs(text)}; }
inline Duration duration_from_ps(std::string_view text) { return Duration{parse_ps_to_fs(text)}; }

/// Canonical picosecond rendering: no trailing fractional zeros, "-" for
/// negatives, never an exponent. Inverse of parse_ps_to_fs.
std::string format_ps(std::int64_t fs);
inline std::string format_ps(Time t) { return format_ps(t.fs()); }
inline std::string format_ps(Duration d) { return format_ps(d.fs()); }

namespace literals {

constexpr Duration operator""_fs(unsigned long long v) { return Duration{static_cast<std::int64_t>(v)}; }
constexpr Duration operator""_ps(unsigned long long v) { return Duration{static_cast<std::int64_t>(v) * kFsPerPs}; }
constexpr Duration operator""_ns(unsigned long long v) { return Duration{static_cast<std::int64_t>(v) * kFsPerNs}; }

}  // namespace literals

}  // namespace vtdc
