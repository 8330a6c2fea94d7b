#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "vtdc/tdc.hpp"

using namespace vtdc;
using namespace vtdc::literals;

namespace {

VernierTdcConfig vernier(int n, Duration slow = duration_from_ps("102.7"), Duration fast = duration_from_ps("77.7"),
                         Duration mismatch = 0_fs, Duration jitter = 0_fs) {
  return {{n, slow, mismatch, jitter}, {n, fast, mismatch, jitter}};
}

FlashTdcConfig flash(int n, Duration tau, Duration mismatch = 0_fs, Duration jitter = 0_fs) {
  return {{n, tau, mismatch, jitter}};
}

}  // namespace

TEST_CASE("vernier_convert examples", "[tdc]") {
  const auto cfg8 = vernier(8);
  const auto zero = vernier_convert(cfg8, Time{1'000'000}, Time{1'000'000}, Seed{0});
  CHECK(zero.code.value == 0);
  CHECK_FALSE(zero.flags().any());

  REQUIRE(oracle::vernier_code(102'700, 77'700, 8, 0, 110'000) == 4);
  const auto r110 = vernier_convert(cfg8, Time{0}, Time{110'000}, Seed{0});
  CHECK(r110.code.value == 4);
  CHECK(r110.thermometer.to_string() == "11110000");

  REQUIRE(oracle::vernier_code(102'700, 77'700, 64, 2'500'000, 4'000'000) == 59);
  const auto transient = vernier_convert(vernier(64), time_from_ps("2500"), time_from_ps("4000"), Seed{0});
  CHECK(transient.code.value == 59);
  CHECK(transient.code.to_string() == "0111011");
  CHECK(transient.delta_t_estimate.fs() == 1'487'500);

  const auto reversed = vernier_convert(vernier(64), time_from_ps("4000"), time_from_ps("2500"), Seed{0});
  CHECK(reversed.code.value == 0);
  CHECK(reversed.flags().underrange);
  CHECK_FALSE(reversed.flags().overrange);
}

TEST_CASE("flash_convert examples", "[tdc]") {
  const auto cfg = flash(8, 100_ps);
  CHECK(flash_convert(cfg, Time{0}, Time{0}, Seed{0}).code.value == 0);

  REQUIRE(oracle::count_below(100'000, 8, 350'000) == 3);
  CHECK(flash_convert(cfg, Time{0}, Time{350'000}, Seed{0}).code.value == 3);

  const auto sat = flash_convert(cfg, Time{0}, Time{900'000}, Seed{0});
  CHECK(sat.code.value == 8);
  CHECK(sat.flags().overrange);

  const auto under = flash_convert(cfg, Time{500}, Time{0}, Seed{0});
  CHECK(under.code.value == 0);
  CHECK(under.flags().underrange);
}

TEST_CASE("metrics", "[tdc]") {
  const auto m = metrics(vernier(8));
  CHECK(m.lsb.fs() == 25'000);
  CHECK(m.full_scale_range.fs() == 200'000);
  CHECK(m.n_codes == 9);
  CHECK(metrics(vernier(64)).full_scale_range.fs() == 1'600'000);
  CHECK(metrics(flash(8, 100_ps)).lsb.fs() == 100'000);
  CHECK(metrics(flash(8, 100_ps)).full_scale_range.fs() == 800'000);
}

TEST_CASE("ideal_code examples and brute-force agreement", "[tdc]") {
  CHECK(ideal_code(25_ps, 8, 0_fs) == 0);
  CHECK(ideal_code(25_ps, 8, 110_ps) == 4);
  CHECK(ideal_code(25_ps, 8, 25_ps) == 0);
  CHECK(ideal_code(25_ps, 8, 25_ps + 1_fs) == 1);
  CHECK(ideal_code(25_ps, 8, -5_ps) == 0);
  CHECK(ideal_code(25_ps, 8, 1_ns) == 8);

  std::mt19937_64 gen(17);
  for (int i = 0; i < 20'000; ++i) {
    const std::int64_t lsb = 1 + static_cast<std::int64_t>(gen() % 50'000);
    const int n = 1 + static_cast<int>(gen() % 40);
    const std::int64_t dt = static_cast<std::int64_t>(gen() % 3'000'000) - 500'000;
    REQUIRE(ideal_code(Duration{lsb}, n, Duration{dt}) == oracle::count_below(lsb, n, dt));
  }
}

TEST_CASE("configuration is validated at construction", "[tdc]") {
  CHECK_THROWS_AS(VernierTdc(vernier(8, 77_ps, 77_ps), Seed{0}), ConfigError);
  CHECK_THROWS_AS(VernierTdc(vernier(8, 70_ps, 77_ps), Seed{0}), ConfigError);
  auto uneven = vernier(8);
  uneven.fast_line.n_stages = 7;
  CHECK_THROWS_AS(VernierTdc(uneven, Seed{0}), ConfigError);
  CHECK_THROWS_AS(FlashTdc(flash(8, 0_fs), Seed{0}), ConfigError);
  CHECK_THROWS_AS(metrics(vernier(8, 10_ps, 20_ps)), ConfigError);
}

TEST_CASE("zero-noise vernier matches the per-stage oracle", "[tdc][property]") {
  std::mt19937_64 gen(2);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(gen() % 80);
    const std::int64_t fast = 1 + static_cast<std::int64_t>(gen() % 150'000);
    const std::int64_t lsb = 1 + static_cast<std::int64_t>(gen() % 60'000);
    const VernierTdc tdc(vernier(n, Duration{fast + lsb}, Duration{fast}), Seed{gen()});
    for (int j = 0; j < 100; ++j) {
      std::int64_t dt;
      switch (j % 4) {
        case 0: dt = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>((n + 2) * lsb)); break;
        case 1: dt = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(n + 2)) * lsb; break;
        case 2: dt = -static_cast<std::int64_t>(gen() % 1'000'000); break;
        default: dt = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(n + 2)) * lsb + 1; break;
      }
      const std::int64_t start = static_cast<std::int64_t>(gen() % 1'000'000'000);
      const auto r = tdc.convert(Time{start}, Time{start + dt}, Seed{gen()});
      REQUIRE(r.code.value == oracle::vernier_code(fast + lsb, fast, n, start, start + dt));
      REQUIRE(r.code.value == ideal_code(Duration{lsb}, n, Duration{dt}));
      REQUIRE(r.flags().underrange == (dt < 0));
      REQUIRE(r.flags().overrange == (static_cast<std::int64_t>(r.code.value) == n));
      REQUIRE_FALSE(r.flags().bubble);
    }
  }
}

TEST_CASE("zero-noise code is monotone and shift invariant", "[tdc][property]") {
  const VernierTdc tdc(vernier(16), Seed{0});
  std::uint32_t prev = 0;
  for (std::int64_t dt = -50'000; dt <= 450'000; dt += 137) {
    const auto a = tdc.convert(Time{0}, Time{dt}, Seed{0});
    const auto b = tdc.convert(Time{987'654'321}, Time{987'654'321 + dt}, Seed{0});
    REQUIRE(a.code.value >= prev);
    REQUIRE(a.code == b.code);
    prev = a.code.value;
  }
}

TEST_CASE("mismatched vernier stays monotone in dt", "[tdc][property]") {
  const VernierTdc tdc(vernier(32, duration_from_ps("102.7"), duration_from_ps("77.7"), 3_ps), Seed{77});
  std::uint32_t prev = 0;
  for (std::int64_t dt = 0; dt <= 900'000; dt += 50) {
    const auto v = tdc.convert(Time{0}, Time{dt}, Seed{0}).code.value;
    REQUIRE(v >= prev);
    prev = v;
  }
}

TEST_CASE("vernier resolves below one gate delay", "[tdc]") {
  const Duration dt = 500_ps;
  const auto v = vernier_convert(vernier(64), Time{0}, Time{0} + dt, Seed{0}).code.value;
  const auto f = flash_convert(flash(64, duration_from_ps("77.7")), Time{0}, Time{0} + dt, Seed{0}).code.value;
  CHECK(v == 19);  // 19 * 25 < 500 <= 20 * 25
  CHECK(f == 6);   // 6 * 77.7 < 500 <= 7 * 77.7
  CHECK(ideal_code(25_ps, 64, dt) == oracle::count_below(25'000, 64, 500'000));
  CHECK(v > 3 * f);
}

TEST_CASE("midpoint reconstruction", "[tdc]") {
  CHECK(midpoint_estimate(0, 25_ps).fs() == 12'500);
  CHECK(midpoint_estimate(24, 25_ps).fs() == 612'500);
  CHECK(midpoint_estimate(0, Duration{3}).fs() == 1);  // 1.5 fs truncated
  CHECK(midpoint_estimate(2, Duration{3}).fs() == 7);  // 7.5 fs truncated
  const auto r = vernier_convert(vernier(8), Time{0}, Time{110'000}, Seed{0});
  CHECK(r.delta_t_estimate.fs() == 112'500);
}

TEST_CASE("realization and jitter are reproducible from seeds", "[tdc]") {
  const auto cfg = vernier(32, duration_from_ps("102.7"), duration_from_ps("77.7"), 2_ps, 1_ps);
  const VernierTdc a(cfg, Seed{9});
  const VernierTdc b(cfg, Seed{9});
  const VernierTdc c(cfg, Seed{10});
  CHECK(std::equal(a.slow_line().stage_delays().begin(), a.slow_line().stage_delays().end(),
                   b.slow_line().stage_delays().begin()));
  CHECK_FALSE(std::equal(a.slow_line().stage_delays().begin(), a.slow_line().stage_delays().end(),
                         c.slow_line().stage_delays().begin()));
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto x = a.convert(Time{0}, Time{400'000}, Seed{s});
    const auto y = b.convert(Time{0}, Time{400'000}, Seed{s});
    REQUIRE(x.code == y.code);
    REQUIRE(x.thermometer == y.thermometer);
  }
  CHECK_FALSE(a.jitter_free());
  CHECK(a.without_jitter().jitter_free());
  CHECK(std::equal(a.slow_line().stage_delays().begin(), a.slow_line().stage_delays().end(),
                   a.without_jitter().slow_line().stage_delays().begin()));
}

TEST_CASE("Tdc variant dispatch", "[tdc]") {
  const Tdc v = VernierTdc(vernier(8), Seed{0});
  const Tdc f = FlashTdc(flash(8, 100_ps), Seed{0});
  CHECK(metrics(v).lsb.fs() == 25'000);
  CHECK(metrics(f).lsb.fs() == 100'000);
  CHECK(n_stages(v) == 8);
  CHECK(jitter_free(f));
  CHECK(convert(v, Time{0}, Time{110'000}, Seed{0}).code.value == 4);
  CHECK(convert(f, Time{0}, Time{350'000}, Seed{0}).code.value == 3);
}
