#include "cavmode/rng.hpp"

#include <cmath>
#include <numbers>

namespace cavmode {

double gaussian(SplitMix64& rng) {
  // Box-Muller; u1 shifted into (0,1] so the log is finite
  const double u1 = 1.0 - rng.uniform01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> complex_gaussian(SplitMix64& rng) {
  const double u1 = 1.0 - rng.uniform01();
  const double u2 = rng.uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  // one Box-Muller pair feeds both quadratures; total variance 1
  return {r * std::cos(a) / std::numbers::sqrt2,
          r * std::sin(a) / std::numbers::sqrt2};
}

} // namespace cavmode
