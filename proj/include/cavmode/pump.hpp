#ifndef CAVMODE_PUMP_HPP
#define CAVMODE_PUMP_HPP

#include "cavmode/grid.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace cavmode {

enum class PumpKind { Rectangular, HermiteGauss, RandomFlat, Constant, Composite };
enum class NormMode { TemporalUnit, RawSpectral };

// Pump envelope beta in spectral and temporal representations. Grid-based
// profiles carry consistent sampled vectors; continuum profiles (rectangular,
// Hermite-Gauss without a grid) evaluate analytically via spectral_at().
// TemporalUnit normalization means sum_k |beta(t_k)|^2 (T/N) = 1 on a grid,
// or the integral of |beta(omega)|^2 over the line = 1 for continuum kinds.
struct PumpProfile {
  PumpKind kind = PumpKind::Constant;
  NormMode norm_mode = NormMode::TemporalUnit;

  std::optional<FrequencyGrid> grid;
  Eigen::VectorXcd spectral; // bin amplitudes, index_min..index_max
  Eigen::VectorXcd temporal; // samples on sample_times

  std::optional<ContinuousAxis> axis; // for continuum (CSPDC) use
  double rect_width = 0;              // Omega_p of the rectangular pump
  int hg_order = 0;
  double hg_sigma = 0;
  double hg_amplitude = 0; // continuum normalization constant
  int flat_bins = 0;
  std::uint64_t seed = 0;

  bool is_grid_based() const { return grid.has_value(); }

  // analytic spectral amplitude (Rectangular and continuum HermiteGauss)
  std::complex<double> spectral_at(double omega) const;

  // spectral amplitude of bin n on the grid; 0 outside the index range
  std::complex<double> spectral_bin(int n) const;

  double temporal_norm() const; // sum_k |beta(t_k)|^2 (T/N)
};

// physicists' Hermite polynomial H_k(x)
double hermite_poly(int order, double x);

// beta(omega) = 1 for |omega| <= omega_p/2, else 0. RawSpectral scale
// (the paper folds the pump amplitude into the coupling eta).
// omega_p = +infinity is accepted and means beta == 1 everywhere.
PumpProfile rectangular_pump(const ContinuousAxis& axis, double omega_p);

// Spectral profile H_k(omega/sigma) exp(-omega^2 / 2 sigma^2) sampled on the
// grid bins and normalized to TemporalUnit. Throws if the profile has not
// decayed below 1e-6 of its peak at the grid edge.
PumpProfile hermite_gauss_pump(const FrequencyGrid& grid, int order, double sigma);

// Continuum Hermite-Gauss profile for CSPDC use, unit norm over the line.
PumpProfile hermite_gauss_pump_continuum(int order, double sigma);

// m_bins centered bins filled with i.i.d. complex Gaussian draws from
// SplitMix64(seed), remainder zero, normalized to TemporalUnit.
PumpProfile random_flat_pump(const FrequencyGrid& grid, int m_bins,
                             std::uint64_t seed);

// beta(t) = 1/sqrt(T) for all t; spectral support is exactly the n=0 bin.
PumpProfile constant_pump(const FrequencyGrid& grid);

// General constructor from raw spectral amplitudes (normalized when asked).
PumpProfile pump_from_spectral(const FrequencyGrid& grid,
                               const Eigen::VectorXcd& spectral,
                               NormMode norm = NormMode::TemporalUnit);

// weighted temporal overlap (T/N) sum_k conj(a(t_k)) b(t_k)
std::complex<double> temporal_overlap(const PumpProfile& a, const PumpProfile& b);

// full width (rad) of the bin range where |spectral| > 1e-6 * peak
double effective_bandwidth(const PumpProfile& p);

// Ordered set of mutually orthogonal pump envelopes for the MQPG
// (one per cavity resonance, spaced by fsr_offset).
struct PumpSet {
  std::vector<PumpProfile> members;
  double fsr_offset = 0;

  double max_cross_overlap() const; // largest |<beta_m, beta_l>|, m != l
};

// Hermite-Gauss envelopes of the given distinct orders with common width.
// Throws if any pairwise overlap exceeds 1e-8.
PumpSet mqpg_pump_set(const FrequencyGrid& grid, const std::vector<int>& orders,
                      double sigma, double fsr_offset = 0);

// First `count` discrete Hermite-Gauss modes: eigenvectors of the symmetric
// tridiagonal operator commuting with the centered discrete Fourier transform.
// Exactly orthonormal, so a complete set (count == N) spans all bins.
PumpSet discrete_hermite_set(const FrequencyGrid& grid, int count,
                             double fsr_offset = 0);

} // namespace cavmode

#endif // CAVMODE_PUMP_HPP
