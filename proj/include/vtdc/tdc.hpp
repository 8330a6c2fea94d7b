#pragma once

// Complete converter models.
//
// VernierTdc: the start edge runs down the slow chain and the stop edge
// down the fast chain; arbiter k compares the k-th taps of both. The stop
// edge gains (tau_slow - tau_fast) per stage, so the effective resolution is
// the delay difference rather than one gate delay.
//
// FlashTdc: single tapped chain for the start edge; every tap is compared
// against the undelayed stop edge. Resolution is one stage delay.

#include <cstdint>
#include <variant>

#include "vtdc/delay_line.hpp"
#include "vtdc/random.hpp"
#include "vtdc/sampler.hpp"
#include "vtdc/time.hpp"

namespace vtdc {

struct VernierTdcConfig {
  DelayLineSpec slow_line;  ///< start path
  DelayLineSpec fast_line;  ///< stop path

  int n_stages() const { return slow_line.n_stages; }
  /// Both lines valid, equal stage counts, slow nominal > fast nominal.
  void validate() const;

  bool operator==(const VernierTdcConfig&) const = default;
};

struct FlashTdcConfig {
  DelayLineSpec line;  ///< start path

  int n_stages() const { return line.n_stages; }
  void validate() const { line.validate(); }

  bool operator==(const FlashTdcConfig&) const = default;
};

struct TdcMetrics {
  Duration lsb;
  Duration full_scale_range;  ///< n_stages * lsb
  int n_codes = 0;            ///< n_stages + 1
};

TdcMetrics metrics(const VernierTdcConfig& cfg);
TdcMetrics metrics(const FlashTdcConfig& cfg);

struct ConversionResult {
  Time t_start;
  Time t_stop;
  BinaryCode code;
  ThermometerCode thermometer;
  Duration delta_t_estimate;  ///< bin midpoint, see midpoint_estimate

  const CodeFlags& flags() const { return code.flags; }
};

/// (value + 1/2) * lsb, computed as ((2 * value + 1) * lsb) / 2 in integer
/// femtoseconds: exact for even lsb, truncated toward zero for odd lsb.
Duration midpoint_estimate(std::uint32_t value, Duration lsb);

/// Closed-form zero-noise code: |{k in [1, n] : k * lsb < delta_t}|.
/// Test oracle only; the converters never call it.
std::int64_t ideal_code(Duration lsb, int n_stages, Duration delta_t);
inline std::int64_t ideal_code(const TdcMetrics& m, Duration delta_t) {
  return ideal_code(m.lsb, m.n_codes - 1, delta_t);
}

/// A Vernier converter with both chains realized once from (config, seed).
/// Immutable; convert() is safe to call concurrently.
class VernierTdc {
 public:
  /// Slow chain realized from sub_seed(seed, 0), fast from sub_seed(seed, 1).
  VernierTdc(VernierTdcConfig cfg, Seed mismatch_seed);

  const VernierTdcConfig& config() const { return cfg_; }
  const DelayLineInstance& slow_line() const { return slow_; }
  const DelayLineInstance& fast_line() const { return fast_; }
  int n_stages() const { return cfg_.n_stages(); }
  TdcMetrics metrics() const { return metrics_; }
  bool jitter_free() const { return cfg_.slow_line.jitter_sigma.fs() == 0 && cfg_.fast_line.jitter_sigma.fs() == 0; }

  /// Same realized chains, jitter removed.
  VernierTdc without_jitter() const;

  /// Jitter for the slow chain comes from sub_seed(jitter_seed, 0), for the
  /// fast chain from sub_seed(jitter_seed, 1). A stop before the start
  /// yields value 0 with the underrange flag.
  ConversionResult convert(Time t_start, Time t_stop, Seed jitter_seed) const;

 private:
  VernierTdcConfig cfg_;
  DelayLineInstance slow_;
  DelayLineInstance fast_;
  TdcMetrics metrics_;
};

class FlashTdc {
 public:
  FlashTdc(FlashTdcConfig cfg, Seed mismatch_seed);

  const FlashTdcConfig& config() const { return cfg_; }
  const DelayLineInstance& line() const { return line_; }
  int n_stages() const { return cfg_.n_stages(); }
  TdcMetrics metrics() const { return metrics_; }
  bool jitter_free() const { return cfg_.line.jitter_sigma.fs() == 0; }
  FlashTdc without_jitter() const;

  ConversionResult convert(Time t_start, Time t_stop, Seed jitter_seed) const;

 private:
  FlashTdcConfig cfg_;
  DelayLineInstance line_;
  TdcMetrics metrics_;
};

/// Any realized converter.
using Tdc = std::variant<VernierTdc, FlashTdc>;

ConversionResult convert(const Tdc& tdc, Time t_start, Time t_stop, Seed jitter_seed);
TdcMetrics metrics(const Tdc& tdc);
int n_stages(const Tdc& tdc);
bool jitter_free(const Tdc& tdc);
Tdc without_jitter(const Tdc& tdc);

/// One-shot helpers: realize from `seed`, then convert with jitter stream
/// sub_seed(seed, 2).
ConversionResult vernier_convert(const VernierTdcConfig& cfg, Time t_start, Time t_stop, Seed seed);
ConversionResult flash_convert(const FlashTdcConfig& cfg, Time t_start, Time t_stop, Seed seed);

}  // namespace vtdc
