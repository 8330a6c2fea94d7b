#pragma once

// Transfer-curve and precision characterization.
//
// Transition points use the edge convention: T_k is the smallest Delta t
// whose output code is >= k. With the integer femtosecond timebase a
// bisection on a zero-jitter converter lands on the exact transition.

#include <cstdint>
#include <map>
#include <vector>

#include "vtdc/random.hpp"
#include "vtdc/tdc.hpp"
#include "vtdc/time.hpp"

namespace vtdc {

struct TransferPoint {
  Duration delta_t;
  std::int64_t code = 0;

  bool operator==(const TransferPoint&) const = default;
};

struct TransferCurve {
  std::vector<TransferPoint> points;  ///< delta_t strictly increasing

  bool operator==(const TransferCurve&) const = default;
};

/// One conversion per grid point t_min, t_min + step, ... <= t_max with
/// t_start = 0. Rejects jittered converters, step < 1 fs and t_min >= t_max.
TransferCurve sweep_transfer(const Tdc& tdc, Duration t_min, Duration t_max, Duration step);

/// T_k = first grid delta_t with code >= k, k = 1..max code. Throws on a
/// curve whose code ever decreases.
std::vector<Duration> find_transitions(const TransferCurve& curve);

/// Exact transitions of a zero-jitter converter over (t_min, t_max]: coarse
/// sweep at `coarse_step`, then bisection of every code change down to 1 fs.
/// A coarse_step of zero selects lsb / 10.
std::vector<Duration> refine_transitions(const Tdc& tdc, Duration t_min, Duration t_max,
                                         Duration coarse_step = Duration{0});

struct NonlinearityReport {
  Duration lsb;
  std::vector<Duration> transitions;
  std::vector<double> dnl;  ///< size transitions - 1, LSB units
  std::vector<double> inl;  ///< size transitions, LSB units
  double dnl_peak = 0.0;    ///< max |dnl|
  double inl_peak = 0.0;    ///< max |inl|
};

/// dnl_k = (T_{k+1} - T_k) / lsb - 1, inl_k = (T_k - T_1) / lsb - (k - 1).
/// Throws std::invalid_argument with fewer than two transitions.
NonlinearityReport dnl_inl(const std::vector<Duration>& transitions, Duration lsb);

struct PrecisionReport {
  Duration delta_t;
  std::int64_t n_trials = 0;
  double code_mean = 0.0;
  double code_std = 0.0;  ///< population standard deviation
  std::map<std::int64_t, std::int64_t> histogram;
};

/// n_trials conversions of (0, delta_t); trial i draws jitter from
/// sub_seed(seed, i).
PrecisionReport single_shot(const Tdc& tdc, Duration delta_t, std::int64_t n_trials, Seed seed);

}  // namespace vtdc
