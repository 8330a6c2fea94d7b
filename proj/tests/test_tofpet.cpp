#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "vtdc/tofpet.hpp"

using namespace vtdc;
using namespace vtdc::literals;
using Catch::Approx;

namespace {

constexpr double kC3e8 = 300.0;  // 3e8 m/s in mm/ns

Tdc reference_tdc(int n = 64) {
  return VernierTdc({{n, duration_from_ps("102.7"), 0_fs, 0_fs}, {n, duration_from_ps("77.7"), 0_fs, 0_fs}}, Seed{0});
}

}  // namespace

TEST_CASE("arrival_times kinematics", "[tofpet]") {
  const DetectorGeometry geom{800.0, kSpeedOfLightMmPerNs};
  const auto mid = arrival_times(geom, {0.0, Time{5'000'000}});
  CHECK(mid.t1 == mid.t2);

  // (400 +/- 100) mm / 299.792458 mm/ns, rounded to fs independently.
  const auto r = arrival_times(geom, {100.0, Time{0}});
  CHECK(r.t1.fs() == 1'667'820);
  CHECK(r.t2.fs() == 1'000'692);
  CHECK((r.t1 - r.t2).fs() == 667'128);  // 2 * 100 / c = 667.128 ps

  const auto face = arrival_times(geom, {400.0, Time{123}});
  CHECK(face.t2.fs() == 123);
  CHECK(face.t1 >= Time{123});

  CHECK_THROWS_AS(arrival_times(geom, {400.5, Time{0}}), std::invalid_argument);
  CHECK_THROWS_AS(arrival_times({0.0, 300.0}, {0.0, Time{0}}), std::invalid_argument);
  CHECK_THROWS_AS(arrival_times({800.0, -1.0}, {0.0, Time{0}}), std::invalid_argument);
}

TEST_CASE("delta_t is the exact signed difference", "[tofpet]") {
  CHECK(delta_t({Time{10}, Time{10}}) == 0_fs);
  CHECK(delta_t({Time{1'000'000}, Time{1'066'000}}) == 66_ps);
  CHECK(delta_t({Time{5'000}, Time{2'000}}).fs() == -3'000);
}

TEST_CASE("displacement is c * dt / 2", "[tofpet]") {
  const DetectorGeometry g{800.0, kC3e8};
  CHECK(displacement_mm(66_ps, g) == Approx(9.9).margin(1e-12));
  CHECK(displacement_mm(0_fs, g) == 0.0);
  CHECK(displacement_mm(25_ps, g) == Approx(3.75).margin(1e-12));
  CHECK(displacement_mm(-25_ps, g) == Approx(-3.75).margin(1e-12));

  // Linear with slope c / 2 (mm per ns).
  for (std::int64_t ps : {10, 333, 1500}) {
    const Duration dt{ps * kFsPerPs};
    CHECK(displacement_mm(dt, g) / dt.ns() == Approx(kC3e8 / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("localize examples", "[tofpet]") {
  const DetectorGeometry g{800.0, kC3e8};
  const Tdc tdc = reference_tdc();

  const auto centre = localize(g, arrival_times(g, {0.0, Time{0}}), tdc, Seed{0});
  CHECK(centre.measured_code == 0);
  CHECK(centre.position_estimate_mm == Approx(kC3e8 * 0.025 / 4.0).margin(1e-12));
  CHECK(centre.sign == 1);

  const auto rec = arrival_times(g, {93.75, Time{0}});
  REQUIRE(delta_t(rec).fs() == -625'000);
  const auto on_edge = localize(g, rec, tdc, Seed{0});
  CHECK(on_edge.measured_code == 24);
  CHECK(on_edge.dt_estimate.fs() == 612'500);
  CHECK(on_edge.position_estimate_mm == Approx(91.875).margin(1e-9));

  const auto mirrored = localize(g, arrival_times(g, {-93.75, Time{0}}), tdc, Seed{0});
  CHECK(mirrored.sign == -1);
  CHECK(mirrored.position_estimate_mm == Approx(-91.875).margin(1e-9));

  // 64 * 25 ps = 1.6 ns of range covers |x| <= 240 mm at 3e8 m/s.
  CHECK_THROWS_AS(localize(g, arrival_times(g, {300.0, Time{0}}), tdc, Seed{0}), OverrangeError);
  CHECK(localize_flagged(g, arrival_times(g, {300.0, Time{0}}), tdc, Seed{0}).flags.overrange);
}

TEST_CASE("kinematics round trip", "[tofpet][property]") {
  const DetectorGeometry g{800.0, kSpeedOfLightMmPerNs};
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> pos(-400.0, 400.0);
  const double fs_mm = g.c_mm_per_ns * 1e-6;
  for (int i = 0; i < 20'000; ++i) {
    const double x = pos(gen);
    const auto rec = arrival_times(g, {x, Time{static_cast<std::int64_t>(gen() % 1'000'000'000)}});
    const double expected_dt_fs = -2.0 * x / g.c_mm_per_ns * 1e6;
    REQUIRE(std::abs(static_cast<double>(delta_t(rec).fs()) - expected_dt_fs) <= 1.0);
    REQUIRE(std::abs(std::abs(displacement_mm(delta_t(rec), g)) - std::abs(x)) <= fs_mm / 2.0 + 1e-9);
  }
}

TEST_CASE("quantization bound and sign consistency", "[tofpet][property]") {
  const DetectorGeometry g{800.0, kC3e8};
  const Tdc tdc = reference_tdc();
  const double quarter = kC3e8 * 0.025 / 4.0;
  const double slack = kC3e8 * 1e-6;  // 1 fs of rounding
  const double window = measurable_half_window_mm(g, tdc);
  CHECK(window == Approx(kC3e8 * (1.6 - 1e-6) / 2.0));

  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> pos(-window, window);
  for (int i = 0; i < 20'000; ++i) {
    const double x = pos(gen);
    const auto loc = localize(g, arrival_times(g, {x, Time{0}}), tdc, Seed{gen()});
    REQUIRE(std::abs(loc.position_estimate_mm - x) <= quarter + slack);
    if (std::abs(x) > quarter + slack) REQUIRE((loc.position_estimate_mm > 0) == (x > 0));
  }
}

TEST_CASE("run_experiment", "[tofpet]") {
  const DetectorGeometry g{800.0, kC3e8};
  const Tdc tdc = reference_tdc();

  ExperimentOptions one;
  one.n_events = 1;
  one.distribution = PositionDistribution::fixed(0.0);
  const auto single = run_experiment(g, tdc, one, Seed{1});
  REQUIRE(single.events.size() == 1);
  CHECK(single.histogram.total() == 1);
  CHECK(single.events[0].code == 0);

  ExperimentOptions many;
  many.n_events = 10'000;
  const auto a = run_experiment(g, tdc, many, Seed{77});
  const auto b = run_experiment(g, tdc, many, Seed{77});
  CHECK(a.summary.max_abs_err_mm == b.summary.max_abs_err_mm);
  CHECK(a.summary.mean_abs_err_mm == b.summary.mean_abs_err_mm);
  CHECK(a.histogram.counts == b.histogram.counts);
  CHECK(a.summary.n_overrange == 0);
  CHECK(a.summary.max_abs_err_mm <= 1.88);
  // Uniform quantization error on [-q, q]: mean |e| = q / 2, FWHM = 2q.
  CHECK(a.summary.mean_abs_err_mm == Approx(1.875 / 2.0).epsilon(0.03));
  CHECK(a.summary.fwhm_mm == Approx(3.75).margin(0.2));

  ExperimentOptions wide = many;
  wide.n_events = 2'000;
  wide.distribution = PositionDistribution::uniform(400.0);
  const auto w = run_experiment(g, tdc, wide, Seed{5});
  CHECK(w.summary.n_overrange > 0);
  CHECK(w.histogram.total() == wide.n_events - w.summary.n_overrange);
  CHECK(w.summary.max_abs_err_mm <= 1.88);

  ExperimentOptions bad;
  bad.n_events = 0;
  CHECK_THROWS_AS(run_experiment(g, tdc, bad, Seed{0}), std::invalid_argument);
}

TEST_CASE("error histogram FWHM", "[tofpet]") {
  ErrorHistogram flat{1.0, -2.0, {10, 10, 10, 10}};
  CHECK(flat.fwhm_mm() == Approx(4.0));
  ErrorHistogram tri{1.0, 0.0, {0, 2, 4, 2, 0}};
  CHECK(tri.fwhm_mm() == Approx(2.0));
  CHECK(ErrorHistogram{}.fwhm_mm() == 0.0);
  CHECK(tri.total() == 8);
}
