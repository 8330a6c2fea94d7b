#include "vtdc/sampler.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace vtdc {

ThermometerCode::ThermometerCode(std::vector<bool> bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw std::invalid_argument("thermometer code must have at least one stage");
}

ThermometerCode ThermometerCode::from_string(std::string_view bits) {
  std::vector<bool> v;
  v.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument(fmt::format("thermometer string '{}' is not binary", bits));
    v.push_back(c == '1');
  }
  return ThermometerCode(std::move(v));
}

ThermometerCode ThermometerCode::canonical(std::size_t ones, std::size_t n) {
  if (ones > n) throw std::invalid_argument("canonical thermometer: more ones than stages");
  std::vector<bool> v(n, false);
  std::fill_n(v.begin(), ones, true);
  return ThermometerCode(std::move(v));
}

std::size_t ThermometerCode::popcount() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::string ThermometerCode::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (bool b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

std::string CodeFlags::to_string() const {
  std::string s;
  auto add = [&](bool set, std::string_view name) {
    if (!set) return;
    if (!s.empty()) s += '|';
    s += name;
  };
  add(overrange, "overrange");
  add(underrange, "underrange");
  add(bubble, "bubble");
  return s.empty() ? "none" : s;
}

std::string BinaryCode::to_string() const {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((value >> i) & 1U) s[static_cast<std::size_t>(width - 1 - i)] = '1';
  }
  return s;
}

int code_width(std::size_t n_stages) {
  // bit_width(n) is the number of bits needed to hold n itself.
  return std::max(1, static_cast<int>(std::bit_width(n_stages)));
}

ThermometerCode sample_bank(std::span<const Time> start_taps, std::span<const Time> stop_taps) {
  if (start_taps.size() != stop_taps.size())
    throw std::invalid_argument(
        fmt::format("sample_bank: {} start taps vs {} stop taps", start_taps.size(), stop_taps.size()));
  if (start_taps.empty()) throw std::invalid_argument("sample_bank: no stages");
  std::vector<bool> bits(start_taps.size());
  for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = arbiter_sample(start_taps[k], stop_taps[k]);
  return ThermometerCode(std::move(bits));
}

LeadingOnes leading_ones(const ThermometerCode& code) {
  const auto& bits = code.bits();
  const auto first_zero = std::find(bits.begin(), bits.end(), false);
  LeadingOnes r;
  r.count = static_cast<std::size_t>(first_zero - bits.begin());
  r.bubble = std::find(first_zero, bits.end(), true) != bits.end();
  return r;
}

BinaryCode priority_encode(const ThermometerCode& code) {
  const LeadingOnes lo = leading_ones(code);
  BinaryCode out;
  out.value = static_cast<std::uint32_t>(lo.count);
  out.width = code_width(code.size());
  out.flags.bubble = lo.bubble;
  out.flags.overrange = lo.count == code.size();
  return out;
}

}  // namespace vtdc
