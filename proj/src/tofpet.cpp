#include "vtdc/tofpet.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace vtdc {

namespace {

constexpr double kFsPerNsD = 1e6;

Duration flight_time(double path_mm, const DetectorGeometry& geom) {
  return Duration{std::llround(path_mm / geom.c_mm_per_ns * kFsPerNsD)};
}

}  // namespace

void DetectorGeometry::validate() const {
  if (!(separation_mm > 0.0) || !std::isfinite(separation_mm))
    throw std::invalid_argument(fmt::format("detector separation must be > 0 mm, got {}", separation_mm));
  if (!(c_mm_per_ns > 0.0) || !std::isfinite(c_mm_per_ns))
    throw std::invalid_argument(fmt::format("speed of light must be > 0 mm/ns, got {}", c_mm_per_ns));
}

CoincidenceRecord arrival_times(const DetectorGeometry& geom, const AnnihilationEvent& event) {
  geom.validate();
  const double half = geom.separation_mm / 2.0;
  if (!(std::abs(event.position_mm) <= half))
    throw std::invalid_argument(
        fmt::format("event at {} mm lies outside the +/-{} mm line of response", event.position_mm, half));
  return {event.emission_time + flight_time(half + event.position_mm, geom),
          event.emission_time + flight_time(half - event.position_mm, geom)};
}

double displacement_mm(Duration dt, const DetectorGeometry& geom) {
  return geom.c_mm_per_ns * (static_cast<double>(dt.fs()) / kFsPerNsD) / 2.0;
}

LocalizationResult localize_flagged(const DetectorGeometry& geom, const CoincidenceRecord& rec, const Tdc& tdc,
                                    Seed seed) {
  geom.validate();
  const bool det2_first = rec.t2 <= rec.t1;
  const Time start = det2_first ? rec.t2 : rec.t1;
  const Time stop = det2_first ? rec.t1 : rec.t2;
  const ConversionResult conv = convert(tdc, start, stop, seed);

  LocalizationResult r;
  r.measured_code = conv.code.value;
  r.dt_estimate = conv.delta_t_estimate;
  r.sign = det2_first ? 1 : -1;
  r.position_estimate_mm = r.sign * displacement_mm(r.dt_estimate, geom);
  r.flags = conv.code.flags;
  return r;
}

LocalizationResult localize(const DetectorGeometry& geom, const CoincidenceRecord& rec, const Tdc& tdc, Seed seed) {
  LocalizationResult r = localize_flagged(geom, rec, tdc, seed);
  if (r.flags.overrange)
    throw OverrangeError(fmt::format("|t2 - t1| = {} ps exceeds the converter range of {} ps",
                                     format_ps(rec.t2 > rec.t1 ? rec.t2 - rec.t1 : rec.t1 - rec.t2),
                                     format_ps(metrics(tdc).full_scale_range)));
  return r;
}

double measurable_half_window_mm(const DetectorGeometry& geom, const Tdc& tdc) {
  geom.validate();
  // Keep 1 fs clear of the saturating interval so rounding cannot overrange.
  const Duration max_dt = metrics(tdc).full_scale_range - Duration{1};
  return std::min(geom.separation_mm / 2.0, displacement_mm(max_dt, geom));
}

std::int64_t ErrorHistogram::total() const {
  std::int64_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

double ErrorHistogram::fwhm_mm() const {
  if (counts.empty()) return 0.0;
  const auto peak = *std::max_element(counts.begin(), counts.end());
  if (peak == 0) return 0.0;
  const double half = static_cast<double>(peak) / 2.0;
  const auto center = [&](std::size_t i) { return lower_edge_mm + (static_cast<double>(i) + 0.5) * bin_width_mm; };
  const auto value = [&](std::size_t i) { return static_cast<double>(counts[i]); };

  std::size_t left = 0;
  while (value(left) < half) ++left;
  std::size_t right = counts.size() - 1;
  while (value(right) < half) --right;

  double x_left = center(left) - bin_width_mm / 2.0;
  if (left > 0) x_left = center(left - 1) + (half - value(left - 1)) / (value(left) - value(left - 1)) * bin_width_mm;
  double x_right = center(right) + bin_width_mm / 2.0;
  if (right + 1 < counts.size())
    x_right = center(right) + (value(right) - half) / (value(right) - value(right + 1)) * bin_width_mm;
  return x_right - x_left;
}

ExperimentResult run_experiment(const DetectorGeometry& geom, const Tdc& tdc, const ExperimentOptions& opts,
                                Seed seed) {
  geom.validate();
  if (opts.n_events < 1) throw std::invalid_argument("run_experiment needs n_events >= 1");
  if (!(opts.histogram_bin_mm > 0.0)) throw std::invalid_argument("histogram bin width must be > 0 mm");
  if (opts.arrival_sigma.fs() < 0) throw std::invalid_argument("arrival sigma must be >= 0");

  const auto& dist = opts.distribution;
  double half_width = dist.half_width_mm > 0.0 ? dist.half_width_mm : measurable_half_window_mm(geom, tdc);
  half_width = std::min(half_width, geom.separation_mm / 2.0);

  ExperimentResult out;
  out.events.reserve(static_cast<std::size_t>(opts.n_events));
  for (std::int64_t i = 0; i < opts.n_events; ++i) {
    const Seed event_seed = sub_seed(seed, static_cast<std::uint64_t>(i));
    Rng rng(event_seed);

    AnnihilationEvent ev;
    ev.position_mm = dist.kind == PositionDistribution::Kind::fixed ? dist.position_mm
                                                                    : rng.uniform(-half_width, half_width);
    ev.emission_time = Time{0} + opts.event_period * i;

    CoincidenceRecord rec = arrival_times(geom, ev);
    rec.t1 += rng.normal_fs(opts.arrival_sigma);
    rec.t2 += rng.normal_fs(opts.arrival_sigma);

    const LocalizationResult loc = localize_flagged(geom, rec, tdc, sub_seed(event_seed, 1));
    EventRecord row;
    row.event_id = i;
    row.x_true_mm = ev.position_mm;
    row.t1 = rec.t1;
    row.t2 = rec.t2;
    row.code = loc.measured_code;
    row.x_est_mm = loc.position_estimate_mm;
    row.err_mm = row.x_est_mm - row.x_true_mm;
    row.overrange = loc.flags.overrange;
    out.events.push_back(row);
  }

  auto& s = out.summary;
  s.n_events = opts.n_events;
  double sum_abs = 0.0;
  double sum_sq = 0.0;
  double err_min = 0.0;
  double err_max = 0.0;
  std::int64_t n_in = 0;
  for (const auto& e : out.events) {
    if (e.overrange) {
      ++s.n_overrange;
      continue;
    }
    const double a = std::abs(e.err_mm);
    sum_abs += a;
    sum_sq += e.err_mm * e.err_mm;
    s.max_abs_err_mm = std::max(s.max_abs_err_mm, a);
    err_min = n_in == 0 ? e.err_mm : std::min(err_min, e.err_mm);
    err_max = n_in == 0 ? e.err_mm : std::max(err_max, e.err_mm);
    ++n_in;
  }

  auto& h = out.histogram;
  h.bin_width_mm = opts.histogram_bin_mm;
  if (n_in > 0) {
    s.mean_abs_err_mm = sum_abs / static_cast<double>(n_in);
    s.rms_err_mm = std::sqrt(sum_sq / static_cast<double>(n_in));
    const auto lo = static_cast<std::int64_t>(std::floor(err_min / h.bin_width_mm));
    const auto hi = static_cast<std::int64_t>(std::floor(err_max / h.bin_width_mm));
    h.lower_edge_mm = static_cast<double>(lo) * h.bin_width_mm;
    h.counts.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    for (const auto& e : out.events) {
      if (e.overrange) continue;
      auto idx = static_cast<std::int64_t>(std::floor(e.err_mm / h.bin_width_mm)) - lo;
      idx = std::clamp<std::int64_t>(idx, 0, hi - lo);
      ++h.counts[static_cast<std::size_t>(idx)];
    }
    s.fwhm_mm = h.fwhm_mm();
  }
  return out;
}

}  // namespace vtdc
