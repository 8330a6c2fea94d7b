#include <catch_amalgamated.hpp>

#include <cstdint>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "vtdc/random.hpp"
#include "vtdc/time.hpp"

using namespace vtdc;
using namespace vtdc::literals;

TEST_CASE("time_from_ps parses exact femtoseconds", "[core][time]") {
  CHECK(time_from_ps("0").fs() == 0);
  CHECK(time_from_ps("102.7").fs() == 102'700);
  CHECK(time_from_ps("25").fs() == 25'000);
  CHECK(time_from_ps("77.7").fs() == 77'700);
  CHECK(time_from_ps("2500").fs() == 2'500'000);
  CHECK(time_from_ps("-3.5").fs() == -3'500);
  CHECK(time_from_ps("+0.001").fs() == 1);
  CHECK(time_from_ps(" 102.7 ps ").fs() == 102'700);
  CHECK(duration_from_ps("0.125").fs() == 125);
}

TEST_CASE("time_from_ps rejects lossy or malformed text", "[core][time]") {
  CHECK_THROWS_AS(time_from_ps("0.0001"), ParseError);
  CHECK_THROWS_AS(time_from_ps("abc"), ParseError);
  CHECK_THROWS_AS(time_from_ps(""), ParseError);
  CHECK_THROWS_AS(time_from_ps("1."), ParseError);
  CHECK_THROWS_AS(time_from_ps(".5"), ParseError);
  CHECK_THROWS_AS(time_from_ps("1e3"), ParseError);
  CHECK_THROWS_AS(time_from_ps("1.2.3"), ParseError);
  CHECK_THROWS_AS(time_from_ps("--1"), ParseError);
  CHECK_THROWS_AS(time_from_ps("99999999999999999999"), ParseError);
}

TEST_CASE("format_ps is canonical", "[core][time]") {
  CHECK(format_ps(std::int64_t{0}) == "0");
  CHECK(format_ps(std::int64_t{102'700}) == "102.7");
  CHECK(format_ps(std::int64_t{25'000}) == "25");
  CHECK(format_ps(std::int64_t{-1}) == "-0.001");
  CHECK(format_ps(std::int64_t{1'000'010}) == "1000.01");
}

TEST_CASE("ps text round-trips every femtosecond value", "[core][time][property]") {
  std::mt19937_64 gen(7);
  std::vector<std::int64_t> values = {0, 1, -1, 999, 1000, -1000, std::numeric_limits<std::int64_t>::max(),
                                      std::numeric_limits<std::int64_t>::min()};
  std::uniform_int_distribution<std::int64_t> wide(std::numeric_limits<std::int64_t>::min(),
                                                   std::numeric_limits<std::int64_t>::max());
  std::uniform_int_distribution<std::int64_t> narrow(-5'000'000, 5'000'000);
  for (int i = 0; i < 20'000; ++i) values.push_back(i % 2 ? wide(gen) : narrow(gen));
  for (std::int64_t fs : values) {
    INFO(fs);
    REQUIRE(time_from_ps(format_ps(fs)).fs() == fs);
  }
}

TEST_CASE("arithmetic is exact and overflow is reported", "[core][time]") {
  const Time t = time_from_ps("2500");
  CHECK((t + 102_ps).fs() == 2'602'000);
  CHECK((time_from_ps("4000") - t) == 1500_ps);
  CHECK((t - time_from_ps("4000")).fs() == -1'500'000);
  CHECK(25_ps * 64 == Duration{1'600'000});
  CHECK(1_ns == Duration{1'000'000});

  const Time max{std::numeric_limits<std::int64_t>::max()};
  CHECK_THROWS_AS(max + 1_fs, OverflowError);
  CHECK_THROWS_AS(Time{std::numeric_limits<std::int64_t>::min()} - 1_fs, OverflowError);
  CHECK_THROWS_AS(Duration{std::numeric_limits<std::int64_t>::max()} * 2, OverflowError);
  CHECK_THROWS_AS(-Duration{std::numeric_limits<std::int64_t>::min()}, OverflowError);
}

TEST_CASE("sub_seed follows the documented splitmix derivation", "[core][random]") {
  for (std::uint64_t base : {0ULL, 1ULL, 42ULL, 0xFFFFFFFFFFFFFFFFULL}) {
    for (std::uint64_t i = 0; i < 16; ++i) CHECK(sub_seed(Seed{base}, i).value == oracle::derive(base, i));
  }
  CHECK(sub_seed(Seed{1}, 0) != sub_seed(Seed{1}, 1));
  CHECK(sub_seed(Seed{1}, 0) != sub_seed(Seed{2}, 0));
}

TEST_CASE("Gaussian stream matches the documented algorithm", "[core][random]") {
  Rng rng(Seed{99});
  oracle::GaussianStream ref(99);
  for (int i = 0; i < 1000; ++i) REQUIRE(rng.standard_normal() == ref.next());
}

TEST_CASE("Gaussian draws have unit variance", "[core][random]") {
  Rng rng(Seed{2024});
  const int n = 200'000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.standard_normal();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(sq / n - mean * mean - 1.0) < 0.02);
}

TEST_CASE("normal_fs with zero sigma does not consume the stream", "[core][random]") {
  Rng a(Seed{5}), b(Seed{5});
  CHECK(a.normal_fs(0_fs) == 0_fs);
  CHECK(a.standard_normal() == b.standard_normal());
}
