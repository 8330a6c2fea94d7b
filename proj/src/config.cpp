#include "vtdc/config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vtdc {

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      {"architecture", "vernier", "converter model: vernier | flash"},
      {"n_stages", "64", "delay stages per line (>= 1)"},
      {"tau_slow_ps", "102.7", "vernier start-line stage delay"},
      {"tau_fast_ps", "77.7", "vernier stop-line stage delay"},
      {"tau_ps", "100", "flash stage delay"},
      {"mismatch_sigma_ps", "0", "std-dev of static per-stage delay offset"},
      {"jitter_sigma_ps", "0", "std-dev of per-edge per-stage jitter"},
      {"seed", "0", "64-bit base seed"},
      {"sweep_min_ps", "0", "characterize: first swept interval"},
      {"sweep_max_ps", "auto", "characterize: last swept interval (auto = (n_stages + 2) lsb + mismatch margin)"},
      {"sweep_step_ps", "auto", "characterize: coarse grid step (auto = lsb / 10)"},
      {"precision_dt_ps", "auto", "characterize: single-shot interval (auto = middle of code n_stages / 2)"},
      {"precision_trials", "1000", "characterize: single-shot trial count"},
      {"separation_mm", "800", "tof: detector pair separation"},
      {"c_m_per_s", "299792458", "tof: speed of light"},
      {"n_events", "10000", "tof: number of simulated annihilations"},
      {"distribution", "uniform", "tof: event positions: uniform | fixed"},
      {"position_mm", "0", "tof: position for the fixed distribution"},
      {"half_width_mm", "auto", "tof: uniform half width (auto = measurable window)"},
      {"arrival_sigma_ps", "0", "tof: Gaussian noise on each arrival time"},
      {"histogram_bin_mm", "0.1", "tof: error histogram bin width"},
      {"probe_dt_ps", "none", "tof: print the displacement of one interval instead of running events"},
  };
  return schema;
}

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why) {
  throw ConfigError(fmt::format("config key '{}': invalid value '{}': {}", key, value, why));
}

template <class Int>
Int parse_int(std::string_view key, std::string_view value) {
  Int v{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end) bad_value(key, value, "expected an integer");
  return v;
}

double parse_double(std::string_view key, std::string_view value) {
  double v = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) bad_value(key, value, "expected a finite number");
  return v;
}

Duration parse_ps(std::string_view key, std::string_view value) {
  try {
    return duration_from_ps(value);
  } catch (const ParseError& e) {
    bad_value(key, value, e.what());
  }
}

std::optional<Duration> parse_optional_ps(std::string_view key, std::string_view value, std::string_view none_word) {
  if (value == none_word) return std::nullopt;
  return parse_ps(key, value);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  if (value.empty()) bad_value(key, value, "empty value");

  if (key == "architecture") {
    if (value == "vernier")
      cfg.architecture = Architecture::vernier;
    else if (value == "flash")
      cfg.architecture = Architecture::flash;
    else
      bad_value(key, value, "expected vernier or flash");
  } else if (key == "n_stages") {
    cfg.n_stages = parse_int<int>(key, value);
  } else if (key == "tau_slow_ps") {
    cfg.tau_slow = parse_ps(key, value);
  } else if (key == "tau_fast_ps") {
    cfg.tau_fast = parse_ps(key, value);
  } else if (key == "tau_ps") {
    cfg.tau = parse_ps(key, value);
  } else if (key == "mismatch_sigma_ps") {
    cfg.mismatch_sigma = parse_ps(key, value);
  } else if (key == "jitter_sigma_ps") {
    cfg.jitter_sigma = parse_ps(key, value);
  } else if (key == "seed") {
    cfg.seed = Seed{parse_int<std::uint64_t>(key, value)};
  } else if (key == "sweep_min_ps") {
    cfg.sweep_min = parse_ps(key, value);
  } else if (key == "sweep_max_ps") {
    cfg.sweep_max = parse_optional_ps(key, value, "auto");
  } else if (key == "sweep_step_ps") {
    cfg.sweep_step = parse_optional_ps(key, value, "auto");
  } else if (key == "precision_dt_ps") {
    cfg.precision_dt = parse_optional_ps(key, value, "auto");
  } else if (key == "precision_trials") {
    cfg.precision_trials = parse_int<std::int64_t>(key, value);
  } else if (key == "separation_mm") {
    cfg.separation_mm = parse_double(key, value);
  } else if (key == "c_m_per_s") {
    cfg.c_m_per_s = parse_double(key, value);
  } else if (key == "n_events") {
    cfg.n_events = parse_int<std::int64_t>(key, value);
  } else if (key == "distribution") {
    if (value == "uniform")
      cfg.distribution = PositionDistribution::Kind::uniform;
    else if (value == "fixed")
      cfg.distribution = PositionDistribution::Kind::fixed;
    else
      bad_value(key, value, "expected uniform or fixed");
  } else if (key == "position_mm") {
    cfg.position_mm = parse_double(key, value);
  } else if (key == "half_width_mm") {
    cfg.half_width_mm = value == "auto" ? 0.0 : parse_double(key, value);
  } else if (key == "arrival_sigma_ps") {
    cfg.arrival_sigma = parse_ps(key, value);
  } else if (key == "histogram_bin_mm") {
    cfg.histogram_bin_mm = parse_double(key, value);
  } else if (key == "probe_dt_ps") {
    cfg.probe_dt = parse_optional_ps(key, value, "none");
  } else {
    throw ConfigError(fmt::format("unknown config key '{}'", key));
  }
  cfg.explicit_keys.insert(std::string(key));
}

VernierTdcConfig RunConfig::vernier_config() const {
  return {DelayLineSpec{n_stages, tau_slow, mismatch_sigma, jitter_sigma},
          DelayLineSpec{n_stages, tau_fast, mismatch_sigma, jitter_sigma}};
}

FlashTdcConfig RunConfig::flash_config() const {
  return {DelayLineSpec{n_stages, tau, mismatch_sigma, jitter_sigma}};
}

TdcMetrics RunConfig::metrics() const {
  return architecture == Architecture::vernier ? vtdc::metrics(vernier_config()) : vtdc::metrics(flash_config());
}

void RunConfig::validate() const {
  auto require = [](bool ok, std::string_view key, std::string_view why) {
    if (!ok) throw ConfigError(fmt::format("config key '{}': {}", key, why));
  };
  const bool vernier = architecture == Architecture::vernier;
  require(!(vernier && explicit_keys.contains("tau_ps")), "tau_ps", "only valid with architecture = flash");
  require(!(!vernier && explicit_keys.contains("tau_slow_ps")), "tau_slow_ps", "only valid with architecture = vernier");
  require(!(!vernier && explicit_keys.contains("tau_fast_ps")), "tau_fast_ps", "only valid with architecture = vernier");
  require(n_stages >= 1, "n_stages", "must be >= 1");
  if (vernier) {
    require(tau_fast.fs() > 0, "tau_fast_ps", "must be > 0");
    require(tau_slow > tau_fast, "tau_slow_ps", "must exceed tau_fast_ps");
  } else {
    require(tau.fs() > 0, "tau_ps", "must be > 0");
  }
  require(mismatch_sigma.fs() >= 0, "mismatch_sigma_ps", "must be >= 0");
  require(jitter_sigma.fs() >= 0, "jitter_sigma_ps", "must be >= 0");
  require(!sweep_step || sweep_step->fs() >= 1, "sweep_step_ps", "must be >= 0.001");
  require(!sweep_max || *sweep_max > sweep_min, "sweep_max_ps", "must exceed sweep_min_ps");
  require(precision_trials >= 1, "precision_trials", "must be >= 1");
  require(separation_mm > 0.0, "separation_mm", "must be > 0");
  require(c_m_per_s > 0.0, "c_m_per_s", "must be > 0");
  require(n_events >= 1, "n_events", "must be >= 1");
  require(half_width_mm >= 0.0, "half_width_mm", "must be >= 0");
  require(std::abs(position_mm) <= separation_mm / 2.0, "position_mm", "must lie within +/- separation_mm / 2");
  require(arrival_sigma.fs() >= 0, "arrival_sigma_ps", "must be >= 0");
  require(histogram_bin_mm > 0.0, "histogram_bin_mm", "must be > 0");
}

RunConfig parse_config(std::string_view text, RunConfig base, std::string_view origin) {
  RunConfig cfg = std::move(base);
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(fmt::format("{}:{}: expected 'key = value', got '{}'", origin, line_no, line));
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (seen.contains(key)) throw ConfigError(fmt::format("{}:{}: duplicate config key '{}'", origin, line_no, key));
    seen.insert(std::string(key));
    try {
      set_config_value(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", origin, line_no, e.what()));
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read config file '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), RunConfig{}, path);
}

Tdc make_tdc(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.architecture == Architecture::vernier) return VernierTdc(cfg.vernier_config(), cfg.seed);
  return FlashTdc(cfg.flash_config(), cfg.seed);
}

}  // namespace vtdc
