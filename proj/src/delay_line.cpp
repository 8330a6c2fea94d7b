#include "vtdc/delay_line.hpp"

#include <fmt/format.h>

namespace vtdc {

void DelayLineSpec::validate() const {
  if (n_stages < 1) throw ConfigError(fmt::format("delay line needs n_stages >= 1, got {}", n_stages));
  if (nominal_stage_delay.fs() <= 0)
    throw ConfigError(fmt::format("nominal stage delay must be > 0, got {} ps", format_ps(nominal_stage_delay)));
  if (mismatch_sigma.fs() < 0)
    throw ConfigError(fmt::format("mismatch sigma must be >= 0, got {} ps", format_ps(mismatch_sigma)));
  if (jitter_sigma.fs() < 0)
    throw ConfigError(fmt::format("jitter sigma must be >= 0, got {} ps", format_ps(jitter_sigma)));
}

DelayLineInstance::DelayLineInstance(std::vector<Duration> stage_delays) : stage_delays_(std::move(stage_delays)) {
  if (stage_delays_.empty()) throw ConfigError("delay line instance has no stages");
  for (std::size_t i = 0; i < stage_delays_.size(); ++i) {
    if (stage_delays_[i].fs() <= 0)
      throw ConfigError(fmt::format("realized delay of stage {} is {} ps; stage delays must be > 0", i + 1,
                                    format_ps(stage_delays_[i])));
  }
}

Duration DelayLineInstance::total_delay() const {
  Duration total{0};
  for (Duration d : stage_delays_) total += d;
  return total;
}

DelayLineInstance realize_delay_line(const DelayLineSpec& spec, Seed seed) {
  spec.validate();
  std::vector<Duration> delays(static_cast<std::size_t>(spec.n_stages), spec.nominal_stage_delay);
  if (spec.mismatch_sigma.fs() > 0) {
    Rng rng(seed);
    for (Duration& d : delays) d += rng.normal_fs(spec.mismatch_sigma);
  }
  return DelayLineInstance(std::move(delays));
}

std::vector<Time> tap_times(const DelayLineInstance& line, Time edge, Duration jitter_sigma, Seed seed) {
  if (jitter_sigma.fs() < 0) throw ConfigError("jitter sigma must be >= 0");
  std::vector<Time> taps;
  taps.reserve(line.size());
  Time t = edge;
  if (jitter_sigma.fs() == 0) {
    for (Duration d : line.stage_delays()) taps.push_back(t += d);
  } else {
    Rng rng(seed);
    for (Duration d : line.stage_delays()) taps.push_back(t += d + rng.normal_fs(jitter_sigma));
  }
  return taps;
}

}  // namespace vtdc
