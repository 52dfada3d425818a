#ifndef CAVMODE_RNG_HPP
#define CAVMODE_RNG_HPP

#include <complex>
#include <cstdint>

namespace cavmode {

// SplitMix64: the fixed, portable 64-bit generator used everywhere randomness
// is needed. Output sequence is fully determined by the seed on any platform.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform double in [0, 1) with 53 random bits
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // split off an independent stream (seed derived from this stream)
  SplitMix64 split() { return SplitMix64(next()); }
};

// standard normal via Box-Muller on the SplitMix64 stream
double gaussian(SplitMix64& rng);

// complex Gaussian with unit total variance: (g1 + i g2)/sqrt(2)
std::complex<double> complex_gaussian(SplitMix64& rng);

} // namespace cavmode

#endif // CAVMODE_RNG_HPP
