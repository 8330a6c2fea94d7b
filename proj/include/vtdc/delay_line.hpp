#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "vtdc/random.hpp"
#include "vtdc/time.hpp"

namespace vtdc {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Nominal description of a chain of identical delay elements.
struct DelayLineSpec {
  int n_stages = 1;
  Duration nominal_stage_delay{1};
  Duration mismatch_sigma{0};  ///< std-dev of the static per-stage offset
  Duration jitter_sigma{0};    ///< std-dev of the per-edge, per-stage jitter

  /// Throws ConfigError on n_stages < 1, non-positive nominal delay or
  /// negative sigmas.
  void validate() const;

  bool operator==(const DelayLineSpec&) const = default;
};

/// Realized per-stage delays of one physical chain. Every delay is > 0.
class DelayLineInstance {
 public:
  /// Throws ConfigError naming the first non-positive stage.
  explicit DelayLineInstance(std::vector<Duration> stage_delays);

  std::span<const Duration> stage_delays() const { return stage_delays_; }
  std::size_t size() const { return stage_delays_.size(); }
  Duration operator[](std::size_t i) const { return stage_delays_[i]; }

  /// Sum of all realized stage delays.
  Duration total_delay() const;

 private:
  std::vector<Duration> stage_delays_;
};

/// stage_delays[i] = nominal + round(Normal(0, mismatch_sigma)). The seed is
/// ignored when mismatch_sigma is zero.
DelayLineInstance realize_delay_line(const DelayLineSpec& spec, Seed seed);

/// Tap k (1-based) = edge + sum_{i<=k}(stage_delay_i + jitter_ik), returned
/// 0-based. Jitter draws come from a stream seeded by `seed`; with
/// jitter_sigma == 0 the result is exact and seed-independent.
std::vector<Time> tap_times(const DelayLineInstance& line, Time edge, Duration jitter_sigma, Seed seed);

}  // namespace vtdc
