#pragma once

// Arbiter bank, thermometer code and priority encoder.
//
// Each arbiter is a flip-flop whose data input is the delayed start edge and
// whose clock is the delayed stop edge. It latches 1 only if the start edge
// arrived strictly first; a simultaneous arrival latches 0.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vtdc/time.hpp"

namespace vtdc {

/// Sampler bank output, bit k = arbiter k (stored 0-based, printed stage 1
/// first). Clean codes are 1...10...0; bubbled codes are representable.
class ThermometerCode {
 public:
  ThermometerCode() = default;
  explicit ThermometerCode(std::vector<bool> bits);

  /// Parses a string of '0'/'1', stage 1 first (e.g. "11111000").
  static ThermometerCode from_string(std::string_view bits);

  /// Clean code with `ones` leading 1s out of `n` stages.
  static ThermometerCode canonical(std::size_t ones, std::size_t n);

  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<bool>& bits() const { return bits_; }
  std::size_t popcount() const;
  std::string to_string() const;

  bool operator==(const ThermometerCode&) const = default;

 private:
  std::vector<bool> bits_;
};

struct CodeFlags {
  bool overrange = false;
  bool underrange = false;
  bool bubble = false;

  bool any() const { return overrange || underrange || bubble; }
  /// "none", or the set flags joined by '|' in the order overrange, underrange, bubble.
  std::string to_string() const;

  bool operator==(const CodeFlags&) const = default;
};

struct BinaryCode {
  std::uint32_t value = 0;
  int width = 1;
  CodeFlags flags;

  /// MSB-first, exactly `width` characters.
  std::string to_string() const;

  bool operator==(const BinaryCode&) const = default;
};

/// ceil(log2(n + 1)), the bit count needed for values 0..n.
int code_width(std::size_t n_stages);

/// 1 iff data_edge < clock_edge.
constexpr bool arbiter_sample(Time data_edge, Time clock_edge) { return data_edge < clock_edge; }

/// One arbiter per stage. Throws std::invalid_argument on length mismatch
/// or empty input.
ThermometerCode sample_bank(std::span<const Time> start_taps, std::span<const Time> stop_taps);

struct LeadingOnes {
  std::size_t count = 0;
  bool bubble = false;

  bool operator==(const LeadingOnes&) const = default;
};

/// Length of the initial run of 1s; bubble when any 1 follows the first 0.
LeadingOnes leading_ones(const ThermometerCode& code);

/// Transition-detecting priority encoder. value = leading-run length;
/// overrange when every stage fired. underrange is left to the converter.
BinaryCode priority_encode(const ThermometerCode& code);

}  // namespace vtdc
