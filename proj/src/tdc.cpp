#include "vtdc/tdc.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace vtdc {

void VernierTdcConfig::validate() const {
  slow_line.validate();
  fast_line.validate();
  if (slow_line.n_stages != fast_line.n_stages)
    throw ConfigError(fmt::format("vernier lines must have equal stage counts (slow {}, fast {})", slow_line.n_stages,
                                  fast_line.n_stages));
  if (slow_line.nominal_stage_delay <= fast_line.nominal_stage_delay)
    throw ConfigError(fmt::format("vernier slow stage delay ({} ps) must exceed fast stage delay ({} ps)",
                                  format_ps(slow_line.nominal_stage_delay), format_ps(fast_line.nominal_stage_delay)));
}

TdcMetrics metrics(const VernierTdcConfig& cfg) {
  cfg.validate();
  const Duration lsb = cfg.slow_line.nominal_stage_delay - cfg.fast_line.nominal_stage_delay;
  return {lsb, lsb * cfg.n_stages(), cfg.n_stages() + 1};
}

TdcMetrics metrics(const FlashTdcConfig& cfg) {
  cfg.validate();
  const Duration lsb = cfg.line.nominal_stage_delay;
  return {lsb, lsb * cfg.n_stages(), cfg.n_stages() + 1};
}

Duration midpoint_estimate(std::uint32_t value, Duration lsb) {
  return Duration{(lsb * (2 * static_cast<std::int64_t>(value) + 1)).fs() / 2};
}

std::int64_t ideal_code(Duration lsb, int n_stages, Duration delta_t) {
  if (lsb.fs() <= 0) throw std::invalid_argument("ideal_code: lsb must be > 0");
  if (delta_t.fs() <= 0) return 0;
  // k * lsb < dt  <=>  k <= (dt - 1) / lsb for integer femtoseconds.
  return std::min<std::int64_t>(n_stages, (delta_t.fs() - 1) / lsb.fs());
}

namespace {

ConversionResult finish(Time t_start, Time t_stop, ThermometerCode thermometer, Duration lsb) {
  ConversionResult r;
  r.t_start = t_start;
  r.t_stop = t_stop;
  r.code = priority_encode(thermometer);
  if (t_stop < t_start) {
    r.code.value = 0;
    r.code.flags.underrange = true;
    r.code.flags.overrange = false;
  }
  r.thermometer = std::move(thermometer);
  r.delta_t_estimate = midpoint_estimate(r.code.value, lsb);
  return r;
}

template <class Cfg>
const Cfg& validated(const Cfg& cfg) {
  cfg.validate();
  return cfg;
}

DelayLineSpec jitterless(DelayLineSpec spec) {
  spec.jitter_sigma = Duration{0};
  return spec;
}

}  // namespace

VernierTdc::VernierTdc(VernierTdcConfig cfg, Seed mismatch_seed)
    : cfg_(validated(cfg)),
      slow_(realize_delay_line(cfg_.slow_line, sub_seed(mismatch_seed, 0))),
      fast_(realize_delay_line(cfg_.fast_line, sub_seed(mismatch_seed, 1))),
      metrics_(vtdc::metrics(cfg_)) {}

VernierTdc VernierTdc::without_jitter() const {
  VernierTdc copy = *this;
  copy.cfg_.slow_line = jitterless(cfg_.slow_line);
  copy.cfg_.fast_line = jitterless(cfg_.fast_line);
  return copy;
}

ConversionResult VernierTdc::convert(Time t_start, Time t_stop, Seed jitter_seed) const {
  const auto slow_taps = tap_times(slow_, t_start, cfg_.slow_line.jitter_sigma, sub_seed(jitter_seed, 0));
  const auto fast_taps = tap_times(fast_, t_stop, cfg_.fast_line.jitter_sigma, sub_seed(jitter_seed, 1));
  return finish(t_start, t_stop, sample_bank(slow_taps, fast_taps), metrics_.lsb);
}

FlashTdc::FlashTdc(FlashTdcConfig cfg, Seed mismatch_seed)
    : cfg_(validated(cfg)), line_(realize_delay_line(cfg_.line, sub_seed(mismatch_seed, 0))),
      metrics_(vtdc::metrics(cfg_)) {}

FlashTdc FlashTdc::without_jitter() const {
  FlashTdc copy = *this;
  copy.cfg_.line = jitterless(cfg_.line);
  return copy;
}

ConversionResult FlashTdc::convert(Time t_start, Time t_stop, Seed jitter_seed) const {
  const auto taps = tap_times(line_, t_start, cfg_.line.jitter_sigma, sub_seed(jitter_seed, 0));
  const std::vector<Time> stop(taps.size(), t_stop);
  return finish(t_start, t_stop, sample_bank(taps, stop), metrics_.lsb);
}

ConversionResult convert(const Tdc& tdc, Time t_start, Time t_stop, Seed jitter_seed) {
  return std::visit([&](const auto& t) { return t.convert(t_start, t_stop, jitter_seed); }, tdc);
}

TdcMetrics metrics(const Tdc& tdc) {
  return std::visit([](const auto& t) { return t.metrics(); }, tdc);
}

int n_stages(const Tdc& tdc) {
  return std::visit([](const auto& t) { return t.n_stages(); }, tdc);
}

bool jitter_free(const Tdc& tdc) {
  return std::visit([](const auto& t) { return t.jitter_free(); }, tdc);
}

Tdc without_jitter(const Tdc& tdc) {
  return std::visit([](const auto& t) -> Tdc { return t.without_jitter(); }, tdc);
}

ConversionResult vernier_convert(const VernierTdcConfig& cfg, Time t_start, Time t_stop, Seed seed) {
  return VernierTdc(cfg, seed).convert(t_start, t_stop, sub_seed(seed, 2));
}

ConversionResult flash_convert(const FlashTdcConfig& cfg, Time t_start, Time t_stop, Seed seed) {
  return FlashTdc(cfg, seed).convert(t_start, t_stop, sub_seed(seed, 2));
}

}  // namespace vtdc
