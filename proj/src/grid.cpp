#include "cavmode/grid.hpp"
#include "cavmode/errors.hpp"

#include <cmath>
#include <numbers>

namespace cavmode {

using std::numbers::pi;

Eigen::VectorXd FrequencyGrid::sample_times() const {
  Eigen::VectorXd t(n_modes);
  for (int k = 0; k < n_modes; ++k) t[k] = sample_time(k);
  return t;
}

Eigen::VectorXd FrequencyGrid::bin_frequencies() const {
  Eigen::VectorXd w(n_modes);
  for (int k = 0; k < n_modes; ++k) w[k] = omega(index_of(k));
  return w;
}

FrequencyGrid make_grid(double window_T, int n_modes) {
  if (!(window_T > 0))
    throw ParameterError("make_grid: window_T must be positive");
  if (n_modes < 2 || n_modes % 2 != 0)
    throw ParameterError("make_grid: n_modes must be even and >= 2");
  FrequencyGrid g;
  g.window_T = window_T;
  g.n_modes = n_modes;
  g.bin_spacing = 2 * pi / window_T;
  return g;
}

Eigen::VectorXcd to_time_domain(const FrequencyGrid& grid,
                                const Eigen::VectorXcd& spectral) {
  const int n = grid.n_modes;
  if (spectral.size() != n)
    throw ParameterError("to_time_domain: vector length must equal n_modes");
  const double inv_sqrt_T = 1.0 / std::sqrt(grid.window_T);
  Eigen::VectorXcd out(n);
  for (int k = 0; k < n; ++k) {
    const double t = grid.sample_time(k);
    std::complex<double> acc = 0;
    for (int j = 0; j < n; ++j) {
      const double phase = -grid.omega(grid.index_of(j)) * t;
      acc += spectral[j] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    out[k] = acc * inv_sqrt_T;
  }
  return out;
}

Eigen::VectorXcd from_time_domain(const FrequencyGrid& grid,
                                  const Eigen::VectorXcd& temporal) {
  const int n = grid.n_modes;
  if (temporal.size() != n)
    throw ParameterError("from_time_domain: vector length must equal n_modes");
  const double scale = std::sqrt(grid.window_T) / n;
  Eigen::VectorXcd out(n);
  for (int j = 0; j < n; ++j) {
    const double w = grid.omega(grid.index_of(j));
    std::complex<double> acc = 0;
    for (int k = 0; k < n; ++k) {
      const double phase = w * grid.sample_time(k);
      acc += temporal[k] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    out[j] = acc * scale;
  }
  return out;
}

ContinuousAxis make_axis(double center, double half_span, int n_points) {
  if (!(half_span > 0))
    throw ParameterError("make_axis: half_span must be positive");
  if (n_points < 2)
    throw ParameterError("make_axis: n_points must be >= 2");
  ContinuousAxis a;
  a.center = center;
  a.half_span = half_span;
  a.n_points = n_points;
  a.spacing = 2 * half_span / (n_points - 1);
  return a;
}

Eigen::VectorXd ContinuousAxis::points() const {
  Eigen::VectorXd p(n_points);
  for (int i = 0; i < n_points; ++i) p[i] = point(i);
  return p;
}

} // namespace cavmode
