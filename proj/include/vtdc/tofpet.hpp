#pragma once

// Time-of-flight localization along one line of response.
//
// Coordinates: x is measured in mm from the midpoint of the detector pair,
// positive toward detector 2. A photon pair born at x reaches detector 1
// after (L/2 + x)/c and detector 2 after (L/2 - x)/c, so
//   delta_t = t2 - t1 = -2x / c   and   x = -c * delta_t / 2.
// localize() feeds the earlier arrival to the TDC start input and the later
// one to stop, then restores the sign so that localize(arrival_times(e))
// recovers e.position. On a tie detector 2 is treated as first, which puts
// the zero-interval estimate at +c * lsb / 4.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vtdc/random.hpp"
#include "vtdc/tdc.hpp"
#include "vtdc/time.hpp"

namespace vtdc {

inline constexpr double kSpeedOfLightMmPerNs = 299.792458;

class OverrangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

struct DetectorGeometry {
  double separation_mm = 800.0;
  double c_mm_per_ns = kSpeedOfLightMmPerNs;

  void validate() const;
};

struct AnnihilationEvent {
  double position_mm = 0.0;
  Time emission_time;
};

struct CoincidenceRecord {
  Time t1;  ///< arrival at detector 1
  Time t2;  ///< arrival at detector 2
};

/// Arrival times rounded to the nearest fs. Throws std::invalid_argument if
/// the event lies outside the detector segment.
CoincidenceRecord arrival_times(const DetectorGeometry& geom, const AnnihilationEvent& event);

/// t2 - t1, exact.
inline Duration delta_t(const CoincidenceRecord& rec) { return rec.t2 - rec.t1; }

/// c * dt / 2, signed, in mm.
double displacement_mm(Duration dt, const DetectorGeometry& geom);

struct LocalizationTruth {
  double position_mm = 0.0;
  Duration delta_t;
};

struct LocalizationResult {
  std::int64_t measured_code = 0;
  Duration dt_estimate;  ///< magnitude reconstructed from the code
  double position_estimate_mm = 0.0;
  int sign = 1;  ///< +1: detector 2 fired first (or tie), -1: detector 1 first
  CodeFlags flags;
  std::optional<LocalizationTruth> truth;
};

/// Throws OverrangeError when |t2 - t1| exceeds the converter range.
LocalizationResult localize(const DetectorGeometry& geom, const CoincidenceRecord& rec, const Tdc& tdc, Seed seed);

/// Same pipeline, but an overrange result is returned flagged instead of thrown.
LocalizationResult localize_flagged(const DetectorGeometry& geom, const CoincidenceRecord& rec, const Tdc& tdc,
                                    Seed seed);

/// Largest |x| the converter can resolve without saturating, clipped to the
/// detector segment: min(L/2, c * n_stages * lsb / 2).
double measurable_half_window_mm(const DetectorGeometry& geom, const Tdc& tdc);

struct PositionDistribution {
  enum class Kind { uniform, fixed };

  Kind kind = Kind::uniform;
  /// Uniform: events on [-half_width_mm, +half_width_mm]; a non-positive
  /// half width selects the measurable window.
  double half_width_mm = 0.0;
  /// Fixed: every event at this position.
  double position_mm = 0.0;

  static PositionDistribution uniform(double half_width_mm = 0.0) { return {Kind::uniform, half_width_mm, 0.0}; }
  static PositionDistribution fixed(double position_mm) { return {Kind::fixed, 0.0, position_mm}; }
};

struct ExperimentOptions {
  std::int64_t n_events = 10'000;
  PositionDistribution distribution;
  Duration arrival_sigma{0};         ///< optional Gaussian noise on each arrival time
  Duration event_period{1'000'000'000};  ///< emission time spacing, 1 us
  double histogram_bin_mm = 0.1;
};

struct EventRecord {
  std::int64_t event_id = 0;
  double x_true_mm = 0.0;
  Time t1;
  Time t2;
  std::int64_t code = 0;
  double x_est_mm = 0.0;
  double err_mm = 0.0;
  bool overrange = false;
};

/// Signed error histogram with bins [lo + i * w, lo + (i + 1) * w).
struct ErrorHistogram {
  double bin_width_mm = 0.0;
  double lower_edge_mm = 0.0;
  std::vector<std::int64_t> counts;

  std::int64_t total() const;
  /// Full width at half maximum with linear interpolation on the outermost
  /// bins at or above half maximum. Zero for an empty histogram.
  double fwhm_mm() const;
};

struct ExperimentSummary {
  std::int64_t n_events = 0;
  std::int64_t n_overrange = 0;
  double mean_abs_err_mm = 0.0;
  double max_abs_err_mm = 0.0;
  double rms_err_mm = 0.0;
  double fwhm_mm = 0.0;
};

struct ExperimentResult {
  std::vector<EventRecord> events;
  ErrorHistogram histogram;   ///< in-range events only
  ExperimentSummary summary;  ///< in-range events only, overranges counted
};

/// Event i draws its position and arrival noise from sub_seed(seed, i) and
/// its converter jitter from sub_seed(sub_seed(seed, i), 1).
ExperimentResult run_experiment(const DetectorGeometry& geom, const Tdc& tdc, const ExperimentOptions& opts,
                                Seed seed);

}  // namespace vtdc
