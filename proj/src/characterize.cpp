#include "vtdc/characterize.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vtdc {

namespace {

std::int64_t code_at(const Tdc& tdc, Duration dt) {
  return convert(tdc, Time{0}, Time{0} + dt, Seed{0}).code.value;
}

void check_sweep_args(const Tdc& tdc, Duration t_min, Duration t_max, Duration step) {
  if (!jitter_free(tdc))
    throw std::invalid_argument("transfer sweeps need a zero-jitter converter; use single_shot for jitter");
  if (step.fs() < 1) throw std::invalid_argument("sweep step must be >= 1 fs");
  if (t_min >= t_max) throw std::invalid_argument("sweep needs t_min < t_max");
}

}  // namespace

TransferCurve sweep_transfer(const Tdc& tdc, Duration t_min, Duration t_max, Duration step) {
  check_sweep_args(tdc, t_min, t_max, step);
  TransferCurve curve;
  const std::int64_t n_points = (t_max - t_min).fs() / step.fs() + 1;
  curve.points.reserve(static_cast<std::size_t>(n_points));
  for (std::int64_t i = 0; i < n_points; ++i) {
    const Duration dt = t_min + step * i;
    curve.points.push_back({dt, code_at(tdc, dt)});
  }
  return curve;
}

std::vector<Duration> find_transitions(const TransferCurve& curve) {
  std::vector<Duration> transitions;
  std::int64_t prev = 0;
  for (std::size_t i = 0; i < curve.points.size(); ++i) {
    const auto& p = curve.points[i];
    if (i > 0 && p.code < curve.points[i - 1].code)
      throw std::invalid_argument(fmt::format("transfer curve is not monotone at {} ps", format_ps(p.delta_t)));
    for (std::int64_t k = prev + 1; k <= p.code; ++k) transitions.push_back(p.delta_t);
    prev = std::max(prev, p.code);
  }
  return transitions;
}

std::vector<Duration> refine_transitions(const Tdc& tdc, Duration t_min, Duration t_max, Duration coarse_step) {
  if (coarse_step.fs() == 0) coarse_step = Duration{std::max<std::int64_t>(1, metrics(tdc).lsb.fs() / 10)};
  check_sweep_args(tdc, t_min, t_max, coarse_step);

  std::vector<Duration> transitions;
  Duration lo = t_min;
  std::int64_t lo_code = code_at(tdc, lo);
  for (std::int64_t k = 1; k <= lo_code; ++k) transitions.push_back(t_min);

  while (lo < t_max) {
    const Duration hi = std::min(lo + coarse_step, t_max);
    const std::int64_t hi_code = code_at(tdc, hi);
    if (hi_code < lo_code)
      throw std::invalid_argument(fmt::format("converter output is not monotone near {} ps", format_ps(hi)));
    for (std::int64_t k = lo_code + 1; k <= hi_code; ++k) {
      // Invariant: code(a) < k <= code(b).
      Duration a = lo;
      Duration b = hi;
      while ((b - a).fs() > 1) {
        const Duration mid{a.fs() + (b - a).fs() / 2};
        if (code_at(tdc, mid) >= k)
          b = mid;
        else
          a = mid;
      }
      transitions.push_back(b);
    }
    lo = hi;
    lo_code = hi_code;
  }
  return transitions;
}

NonlinearityReport dnl_inl(const std::vector<Duration>& transitions, Duration lsb) {
  if (transitions.size() < 2) throw std::invalid_argument("DNL/INL needs at least two transitions");
  if (lsb.fs() <= 0) throw std::invalid_argument("DNL/INL needs lsb > 0");

  NonlinearityReport r;
  r.lsb = lsb;
  r.transitions = transitions;
  const auto in_lsb = [&](Duration d) { return static_cast<double>(d.fs()) / static_cast<double>(lsb.fs()); };

  // Numerators are formed in integer fs so an ideal line gives exact zeros.
  for (std::size_t k = 0; k + 1 < transitions.size(); ++k)
    r.dnl.push_back(in_lsb(transitions[k + 1] - transitions[k] - lsb));
  for (std::size_t k = 0; k < transitions.size(); ++k)
    r.inl.push_back(in_lsb(transitions[k] - transitions.front() - lsb * static_cast<std::int64_t>(k)));

  for (double v : r.dnl) r.dnl_peak = std::max(r.dnl_peak, std::abs(v));
  for (double v : r.inl) r.inl_peak = std::max(r.inl_peak, std::abs(v));
  return r;
}

PrecisionReport single_shot(const Tdc& tdc, Duration delta_t, std::int64_t n_trials, Seed seed) {
  if (n_trials < 1) throw std::invalid_argument("single_shot needs n_trials >= 1");
  PrecisionReport r;
  r.delta_t = delta_t;
  r.n_trials = n_trials;

  double sum = 0.0;
  for (std::int64_t i = 0; i < n_trials; ++i) {
    const std::int64_t code =
        convert(tdc, Time{0}, Time{0} + delta_t, sub_seed(seed, static_cast<std::uint64_t>(i))).code.value;
    ++r.histogram[code];
    sum += static_cast<double>(code);
  }
  r.code_mean = sum / static_cast<double>(n_trials);

  double ss = 0.0;
  for (const auto& [code, count] : r.histogram) {
    const double d = static_cast<double>(code) - r.code_mean;
    ss += d * d * static_cast<double>(count);
  }
  r.code_std = std::sqrt(ss / static_cast<double>(n_trials));
  return r;
}

}  // namespace vtdc
