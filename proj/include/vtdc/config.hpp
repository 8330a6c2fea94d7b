#pragma once

// Run configuration: a flat "key = value" text file with '#' comments.
// Times are decimal picoseconds (at most three fractional digits), lengths
// are millimetres. Unknown or duplicated keys are hard errors.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vtdc/delay_line.hpp"
#include "vtdc/random.hpp"
#include "vtdc/tdc.hpp"
#include "vtdc/time.hpp"
#include "vtdc/tofpet.hpp"

namespace vtdc {

enum class Architecture { vernier, flash };

struct ConfigKey {
  std::string_view name;
  std::string_view default_value;
  std::string_view help;
};

/// Every accepted key, in documentation order.
const std::vector<ConfigKey>& config_schema();

struct RunConfig {
  Architecture architecture = Architecture::vernier;
  int n_stages = 64;
  Duration tau_slow{102'700};
  Duration tau_fast{77'700};
  Duration tau{100'000};
  Duration mismatch_sigma{0};
  Duration jitter_sigma{0};
  Seed seed{0};

  // characterize
  Duration sweep_min{0};
  std::optional<Duration> sweep_max;
  std::optional<Duration> sweep_step;
  std::optional<Duration> precision_dt;
  std::int64_t precision_trials = 1'000;

  // tof
  double separation_mm = 800.0;
  double c_m_per_s = 299'792'458.0;
  std::int64_t n_events = 10'000;
  PositionDistribution::Kind distribution = PositionDistribution::Kind::uniform;
  double position_mm = 0.0;
  double half_width_mm = 0.0;
  Duration arrival_sigma{0};
  double histogram_bin_mm = 0.1;
  std::optional<Duration> probe_dt;

  /// Keys explicitly present in the parsed text or overrides.
  std::set<std::string, std::less<>> explicit_keys;

  DetectorGeometry geometry() const { return {separation_mm, c_m_per_s * 1e-6}; }
  VernierTdcConfig vernier_config() const;
  FlashTdcConfig flash_config() const;
  TdcMetrics metrics() const;

  /// Cross-key checks; throws ConfigError naming the offending key.
  void validate() const;
};

/// Applies one key. Throws ConfigError naming the key on unknown keys or
/// malformed values.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);

/// Parses config text on top of `base`. `origin` prefixes error messages.
RunConfig parse_config(std::string_view text, RunConfig base = {}, std::string_view origin = "<config>");

/// Reads and parses a config file. Throws ConfigError on IO failure too.
RunConfig load_config(const std::string& path);

/// Realizes the converter described by `cfg` with cfg.seed as mismatch seed.
Tdc make_tdc(const RunConfig& cfg);

}  // namespace vtdc
