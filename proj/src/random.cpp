#include "vtdc/random.hpp"

#include <cmath>
#include <numbers>

namespace vtdc {

double Rng::uniform_open0() {
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double Rng::standard_normal() {
  const double u1 = uniform_open0();
  const double u2 = uniform_open0();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Duration Rng::normal_fs(Duration sigma) {
  if (sigma.fs() == 0) return Duration{0};
  return Duration{std::llround(static_cast<double>(sigma.fs()) * standard_normal())};
}

}  // namespace vtdc
