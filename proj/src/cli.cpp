#include "vtdc/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>

#include "vtdc/characterize.hpp"
#include "vtdc/config.hpp"
#include "vtdc/report.hpp"
#include "vtdc/tdc.hpp"
#include "vtdc/tofpet.hpp"

namespace vtdc {

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool svg = false;
};

std::string schema_footer() {
  std::size_t width = 0;
  for (const auto& k : config_schema()) width = std::max(width, k.name.size());
  std::string s = "Config keys (key = value, '#' comments; times in ps, lengths in mm):\n";
  for (const auto& k : config_schema())
    s += fmt::format("  {:<{}}  {} [default: {}]\n", k.name, width, k.help, k.default_value);
  return s;
}

void add_common(CLI::App& cmd, CommonOptions& o, bool writes_files) {
  cmd.add_option("--config", o.config_path, "config file (key = value)");
  cmd.add_option("--set", o.overrides, "override one config key, KEY=VALUE (repeatable)");
  cmd.add_option("--seed", o.seed, "base seed, overrides the config");
  if (writes_files) {
    cmd.add_option("--out", o.out_dir, "output directory")->capture_default_str();
    cmd.add_flag("--svg", o.svg, "also write an SVG plot");
  }
  cmd.footer(schema_footer());
}

RunConfig build_config(const CommonOptions& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("--set expects KEY=VALUE, got '{}'", kv));
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.seed) cfg.seed = Seed{*o.seed};
  cfg.validate();
  return cfg;
}

std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError(fmt::format("cannot create output directory '{}'", dir));
  return dir;
}

int cmd_convert(const RunConfig& cfg, const std::string& start_ps, const std::string& stop_ps, bool header,
                std::ostream& out) {
  const Time t_start = time_from_ps(start_ps);
  const Time t_stop = time_from_ps(stop_ps);
  const Tdc tdc = make_tdc(cfg);
  const ConversionResult r = convert(tdc, t_start, t_stop, sub_seed(cfg.seed, 2));
  if (header) out << kConversionCsvHeader << '\n';
  out << conversion_csv_row(r) << '\n';
  return r.flags().overrange || r.flags().underrange ? kExitFlagged : kExitOk;
}

int cmd_characterize(const RunConfig& cfg, const CommonOptions& o, std::ostream& out) {
  const Tdc tdc = make_tdc(cfg);
  const Tdc quiet = without_jitter(tdc);
  const TdcMetrics m = metrics(tdc);

  const Duration step = cfg.sweep_step.value_or(Duration{std::max<std::int64_t>(1, m.lsb.fs() / 10)});
  Duration t_max;
  if (cfg.sweep_max) {
    t_max = *cfg.sweep_max;
  } else {
    // Mismatch moves the last transition by ~sigma * sqrt(2 n); cover 6 sigma of that.
    const auto margin = static_cast<std::int64_t>(
        std::ceil(6.0 * static_cast<double>(cfg.mismatch_sigma.fs()) * std::sqrt(2.0 * cfg.n_stages)));
    t_max = m.lsb * (cfg.n_stages + 2) + Duration{margin};
  }
  if (t_max <= cfg.sweep_min) throw ConfigError("config key 'sweep_max_ps': must exceed sweep_min_ps");

  const TransferCurve curve = sweep_transfer(quiet, cfg.sweep_min, t_max, step);
  const std::vector<Duration> transitions = refine_transitions(quiet, cfg.sweep_min, t_max, step);
  const NonlinearityReport nl = dnl_inl(transitions, m.lsb);

  const Duration precision_dt =
      cfg.precision_dt.value_or(midpoint_estimate(static_cast<std::uint32_t>(cfg.n_stages / 2), m.lsb));
  const PrecisionReport pr = single_shot(tdc, precision_dt, cfg.precision_trials, sub_seed(cfg.seed, 3));

  const auto dir = prepare_out_dir(o.out_dir);
  write_file_atomic(dir / "transfer_curve.csv", transfer_curve_csv(curve));
  write_file_atomic(dir / "nonlinearity.json", nonlinearity_json(nl));
  write_file_atomic(dir / "precision.json", precision_json(pr));
  if (o.svg) write_file_atomic(dir / "transfer_curve.svg", transfer_curve_svg(curve));

  out << fmt::format("lsb_fs={} dnl_peak={:.3f} inl_peak={:.3f}\n", m.lsb.fs(), nl.dnl_peak, nl.inl_peak);
  return kExitOk;
}

int cmd_tof(const RunConfig& cfg, const CommonOptions& o, std::ostream& out) {
  const DetectorGeometry geom = cfg.geometry();
  geom.validate();
  const Tdc tdc = make_tdc(cfg);
  const TdcMetrics m = metrics(tdc);

  if (cfg.probe_dt) {
    const Duration dt = *cfg.probe_dt;
    const Duration mag = dt.fs() < 0 ? -dt : dt;
    const ConversionResult r = convert(tdc, Time{0}, Time{0} + mag, sub_seed(cfg.seed, 2));
    out << fmt::format("probe_dt_fs={} displacement_mm={:.3f} code={} dt_est_fs={} displacement_est_mm={:.3f}\n",
                       dt.fs(), displacement_mm(dt, geom), r.code.value, r.delta_t_estimate.fs(),
                       displacement_mm(r.delta_t_estimate, geom));
    return r.flags().overrange ? kExitFlagged : kExitOk;
  }

  ExperimentOptions opts;
  opts.n_events = cfg.n_events;
  opts.distribution = cfg.distribution == PositionDistribution::Kind::fixed
                          ? PositionDistribution::fixed(cfg.position_mm)
                          : PositionDistribution::uniform(cfg.half_width_mm);
  opts.arrival_sigma = cfg.arrival_sigma;
  opts.histogram_bin_mm = cfg.histogram_bin_mm;
  const ExperimentResult res = run_experiment(geom, tdc, opts, cfg.seed);

  const auto dir = prepare_out_dir(o.out_dir);
  write_file_atomic(dir / "events.csv", events_csv(res));
  write_file_atomic(dir / "summary.json", tof_summary_json(res, geom, m, cfg.seed));
  if (o.svg) write_file_atomic(dir / "error_histogram.svg", error_histogram_svg(res.histogram));

  const auto& s = res.summary;
  out << fmt::format("n_events={} n_overrange={} mean_abs_err_mm={:.3f} max_abs_err_mm={:.3f} fwhm_mm={:.3f}\n",
                     s.n_events, s.n_overrange, s.mean_abs_err_mm, s.max_abs_err_mm, s.fwhm_mm);
  return kExitOk;
}

int cmd_info(const RunConfig& cfg, std::ostream& out) {
  const TdcMetrics m = cfg.metrics();
  const bool vernier = cfg.architecture == Architecture::vernier;
  out << fmt::format("architecture={}\n", vernier ? "vernier" : "flash");
  out << fmt::format("n_stages={}\n", cfg.n_stages);
  if (vernier) {
    out << fmt::format("tau_slow_ps={}\ntau_fast_ps={}\n", format_ps(cfg.tau_slow), format_ps(cfg.tau_fast));
  } else {
    out << fmt::format("tau_ps={}\n", format_ps(cfg.tau));
  }
  out << fmt::format("lsb_fs={}\nlsb_ps={}\n", m.lsb.fs(), format_ps(m.lsb));
  out << fmt::format("full_scale_range_fs={}\nn_codes={}\ncode_width={}\n", m.full_scale_range.fs(), m.n_codes,
                     code_width(static_cast<std::size_t>(cfg.n_stages)));
  out << fmt::format("position_lsb_mm={:.6f}\n", displacement_mm(m.lsb, cfg.geometry()));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Behavioral Vernier / flash TDC simulator with characterization and TOF-PET localization", "vtdc"};
  app.require_subcommand(1);

  CommonOptions convert_opts, char_opts, tof_opts, info_opts;
  std::string t_start_ps, t_stop_ps;
  bool header = false;

  auto* convert_cmd = app.add_subcommand("convert", "convert one start/stop pair and print a CSV row");
  convert_cmd->add_option("--t-start", t_start_ps, "start edge [ps]")->required();
  convert_cmd->add_option("--t-stop", t_stop_ps, "stop edge [ps]")->required();
  convert_cmd->add_flag("--header", header, "print the CSV header first");
  add_common(*convert_cmd, convert_opts, false);

  auto* char_cmd = app.add_subcommand("characterize", "transfer curve, DNL/INL and single-shot precision");
  add_common(*char_cmd, char_opts, true);

  auto* tof_cmd = app.add_subcommand("tof", "TOF-PET localization experiment on one detector pair");
  add_common(*tof_cmd, tof_opts, true);

  auto* info_cmd = app.add_subcommand("info", "print converter metrics for a config");
  add_common(*info_cmd, info_opts, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*convert_cmd) return cmd_convert(build_config(convert_opts), t_start_ps, t_stop_ps, header, out);
    if (*char_cmd) return cmd_characterize(build_config(char_opts), char_opts, out);
    if (*tof_cmd) return cmd_tof(build_config(tof_opts), tof_opts, out);
    if (*info_cmd) return cmd_info(build_config(info_opts), out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}

}  // namespace vtdc
