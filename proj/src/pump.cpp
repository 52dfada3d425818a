#include "cavmode/pump.hpp"
#include "cavmode/errors.hpp"
#include "cavmode/rng.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

namespace cavmode {

using std::numbers::pi;

double hermite_poly(int order, double x) {
  if (order < 0) throw ParameterError("hermite_poly: order must be >= 0");
  double hkm1 = 0, hk = 1; // H_0
  for (int k = 0; k < order; ++k) {
    const double hkp1 = 2 * x * hk - 2 * k * hkm1;
    hkm1 = hk;
    hk = hkp1;
  }
  return hk;
}

std::complex<double> PumpProfile::spectral_at(double omega) const {
  switch (kind) {
    case PumpKind::Rectangular:
      return std::abs(omega) <= rect_width / 2 ? 1.0 : 0.0;
    case PumpKind::HermiteGauss:
      if (is_grid_based())
        throw ParameterError("spectral_at: grid-based pump has no analytic form");
      return hg_amplitude * hermite_poly(hg_order, omega / hg_sigma) *
             std::exp(-omega * omega / (2 * hg_sigma * hg_sigma));
    default:
      throw ParameterError("spectral_at: only analytic pump kinds supported");
  }
}

std::complex<double> PumpProfile::spectral_bin(int n) const {
  if (!is_grid_based())
    throw ParameterError("spectral_bin: pump is not grid-based");
  if (n < grid->index_min() || n > grid->index_max()) return 0.0;
  return spectral[grid->offset(n)];
}

double PumpProfile::temporal_norm() const {
  if (!is_grid_based())
    throw ParameterError("temporal_norm: pump is not grid-based");
  return temporal.squaredNorm() * grid->time_step();
}

PumpProfile rectangular_pump(const ContinuousAxis& axis, double omega_p) {
  if (!(omega_p > 0))
    throw ParameterError("rectangular_pump: omega_p must be positive");
  if (std::isfinite(omega_p) && omega_p > 2 * axis.half_span)
    throw ParameterError(
        "rectangular_pump: pump support exceeds the axis span; truncation "
        "would silently alter purity results");
  PumpProfile p;
  p.kind = PumpKind::Rectangular;
  p.norm_mode = NormMode::RawSpectral;
  p.axis = axis;
  p.rect_width = omega_p;
  return p;
}

PumpProfile hermite_gauss_pump(const FrequencyGrid& grid, int order,
                               double sigma) {
  if (order < 0) throw ParameterError("hermite_gauss_pump: order must be >= 0");
  if (!(sigma > 0)) throw ParameterError("hermite_gauss_pump: sigma must be positive");

  const int n = grid.n_modes;
  Eigen::VectorXcd raw(n);
  double peak = 0;
  for (int j = 0; j < n; ++j) {
    const double w = grid.omega(grid.index_of(j));
    const double v = hermite_poly(order, w / sigma) *
                     std::exp(-w * w / (2 * sigma * sigma));
    raw[j] = v;
    peak = std::max(peak, std::abs(v));
  }
  const double edge = std::max(std::abs(raw[0]), std::abs(raw[n - 1]));
  if (!(edge < 1e-6 * peak))
    throw ParameterError(
        "hermite_gauss_pump: profile not negligible at the grid edge "
        "(truncation); reduce sigma or enlarge the grid");

  raw /= raw.norm();
  PumpProfile p;
  p.kind = PumpKind::HermiteGauss;
  p.norm_mode = NormMode::TemporalUnit;
  p.grid = grid;
  p.hg_order = order;
  p.hg_sigma = sigma;
  p.spectral = raw;
  p.temporal = to_time_domain(grid, raw);
  return p;
}

PumpProfile hermite_gauss_pump_continuum(int order, double sigma) {
  if (order < 0) throw ParameterError("hermite_gauss_pump_continuum: order must be >= 0");
  if (!(sigma > 0)) throw ParameterError("hermite_gauss_pump_continuum: sigma must be positive");
  PumpProfile p;
  p.kind = PumpKind::HermiteGauss;
  p.norm_mode = NormMode::TemporalUnit;
  p.hg_order = order;
  p.hg_sigma = sigma;
  // integral of H_k^2 exp(-w^2/sigma^2) over the line = 2^k k! sqrt(pi) sigma
  double factorial = 1;
  for (int k = 2; k <= order; ++k) factorial *= k;
  p.hg_amplitude = 1.0 / std::sqrt(std::pow(2.0, order) * factorial *
                                   std::sqrt(pi) * sigma);
  return p;
}

PumpProfile random_flat_pump(const FrequencyGrid& grid, int m_bins,
                             std::uint64_t seed) {
  if (m_bins < 1 || m_bins > grid.n_modes)
    throw ParameterError("random_flat_pump: need 1 <= M <= n_modes");
  Eigen::VectorXcd raw = Eigen::VectorXcd::Zero(grid.n_modes);
  SplitMix64 rng(seed);
  const int lo = -(m_bins / 2);
  for (int k = 0; k < m_bins; ++k)
    raw[grid.offset(lo + k)] = complex_gaussian(rng);
  const double nrm = raw.norm();
  if (nrm == 0) throw NumericalError("random_flat_pump: degenerate draw");
  raw /= nrm;
  PumpProfile p;
  p.kind = PumpKind::RandomFlat;
  p.norm_mode = NormMode::TemporalUnit;
  p.grid = grid;
  p.flat_bins = m_bins;
  p.seed = seed;
  p.spectral = raw;
  p.temporal = to_time_domain(grid, raw);
  return p;
}

PumpProfile constant_pump(const FrequencyGrid& grid) {
  PumpProfile p;
  p.kind = PumpKind::Constant;
  p.norm_mode = NormMode::TemporalUnit;
  p.grid = grid;
  p.spectral = Eigen::VectorXcd::Zero(grid.n_modes);
  p.spectral[grid.offset(0)] = 1.0;
  p.temporal = Eigen::VectorXcd::Constant(grid.n_modes,
                                          1.0 / std::sqrt(grid.window_T));
  return p;
}

PumpProfile pump_from_spectral(const FrequencyGrid& grid,
                               const Eigen::VectorXcd& spectral,
                               NormMode norm) {
  if (spectral.size() != grid.n_modes)
    throw ParameterError("pump_from_spectral: length mismatch");
  PumpProfile p;
  p.kind = PumpKind::Composite;
  p.norm_mode = norm;
  p.grid = grid;
  p.spectral = spectral;
  if (norm == NormMode::TemporalUnit) {
    const double nrm = p.spectral.norm();
    if (nrm == 0) throw ParameterError("pump_from_spectral: zero profile");
    p.spectral /= nrm;
  }
  p.temporal = to_time_domain(grid, p.spectral);
  return p;
}

std::complex<double> temporal_overlap(const PumpProfile& a,
                                      const PumpProfile& b) {
  if (!a.is_grid_based() || !b.is_grid_based() || !(*a.grid == *b.grid))
    throw ParameterError("temporal_overlap: pumps must share one grid");
  // Eigen's dot conjugates the first argument: <a, b> = sum conj(a_k) b_k
  return a.grid->time_step() * a.temporal.dot(b.temporal);
}

double effective_bandwidth(const PumpProfile& p) {
  if (!p.is_grid_based())
    throw ParameterError("effective_bandwidth: pump is not grid-based");
  double peak = 0;
  for (int j = 0; j < p.spectral.size(); ++j)
    peak = std::max(peak, std::abs(p.spectral[j]));
  int lo = p.spectral.size(), hi = -1;
  for (int j = 0; j < p.spectral.size(); ++j) {
    if (std::abs(p.spectral[j]) > 1e-6 * peak) {
      lo = std::min(lo, j);
      hi = std::max(hi, j);
    }
  }
  if (hi < lo) return 0;
  return (hi - lo + 1) * p.grid->bin_spacing;
}

double PumpSet::max_cross_overlap() const {
  double worst = 0;
  for (std::size_t m = 0; m < members.size(); ++m)
    for (std::size_t l = m + 1; l < members.size(); ++l)
      worst = std::max(worst, std::abs(temporal_overlap(members[m], members[l])));
  return worst;
}

PumpSet mqpg_pump_set(const FrequencyGrid& grid, const std::vector<int>& orders,
                      double sigma, double fsr_offset) {
  if (orders.empty()) throw ParameterError("mqpg_pump_set: no orders given");
  std::set<int> unique(orders.begin(), orders.end());
  if (unique.size() != orders.size())
    throw ParameterError("mqpg_pump_set: duplicate orders (orthogonality impossible)");

  PumpSet set;
  set.fsr_offset = fsr_offset;
  for (int k : orders) set.members.push_back(hermite_gauss_pump(grid, k, sigma));

  const double worst = set.max_cross_overlap();
  if (!(worst < 1e-8))
    throw ParameterError("mqpg_pump_set: pump envelopes not mutually orthogonal");
  if (fsr_offset > 0) {
    for (const auto& m : set.members)
      if (!(effective_bandwidth(m) < fsr_offset))
        throw ParameterError("mqpg_pump_set: member bandwidth exceeds the FSR");
  }
  return set;
}

PumpSet discrete_hermite_set(const FrequencyGrid& grid, int count,
                             double fsr_offset) {
  const int n = grid.n_modes;
  if (count < 1 || count > n)
    throw ParameterError("discrete_hermite_set: need 1 <= count <= n_modes");

  // Dickinson-Steiglitz tridiagonal (periodic corners) commuting with the
  // centered DFT; eigenvectors are the discrete Hermite-Gauss modes.
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  const int center = n / 2;
  for (int k = 0; k < n; ++k) {
    h(k, k) = 2.0 * std::cos(2.0 * pi * (k - center) / n);
    h(k, (k + 1) % n) = 1.0;
    h((k + 1) % n, k) = 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success)
    throw NumericalError("discrete_hermite_set: eigensolver failed");

  PumpSet set;
  set.fsr_offset = fsr_offset;
  for (int j = 0; j < count; ++j) {
    // ascending eigenvalues: the ground (order 0) mode is last
    Eigen::VectorXd v = es.eigenvectors().col(n - 1 - j);
    int imax = 0;
    for (int k = 1; k < n; ++k)
      if (std::abs(v[k]) > std::abs(v[imax])) imax = k;
    if (v[imax] < 0) v = -v;
    PumpProfile p = pump_from_spectral(grid, v.cast<std::complex<double>>(),
                                       NormMode::TemporalUnit);
    p.hg_order = j;
    set.members.push_back(std::move(p));
  }
  return set;
}

} // namespace cavmode
