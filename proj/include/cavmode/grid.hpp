#ifndef CAVMODE_GRID_HPP
#define CAVMODE_GRID_HPP

#include <Eigen/Dense>
#include <complex>

namespace cavmode {

// Finite observation window of duration T with N discrete frequency bins
// omega_n = n * (2*pi/T), n = -N/2 .. N/2-1. All rates share one angular
// frequency unit; T is in the inverse unit. Immutable after construction.
struct FrequencyGrid {
  double window_T = 0;
  int n_modes = 0;
  double bin_spacing = 0; // 2*pi / window_T

  int index_min() const { return -n_modes / 2; }
  int index_max() const { return n_modes / 2 - 1; }

  // storage offset of bin index n (vectors run index_min..index_max)
  int offset(int n) const { return n + n_modes / 2; }
  int index_of(int offset) const { return offset - n_modes / 2; }

  double omega(int n) const { return n * bin_spacing; }
  double sample_time(int k) const {
    return -window_T / 2 + k * (window_T / n_modes);
  }
  double time_step() const { return window_T / n_modes; }

  Eigen::VectorXd sample_times() const;
  Eigen::VectorXd bin_frequencies() const;

  bool operator==(const FrequencyGrid& o) const {
    return window_T == o.window_T && n_modes == o.n_modes;
  }
};

FrequencyGrid make_grid(double window_T, int n_modes);

// x(t_k) = (1/sqrt(T)) sum_n X(omega_n) exp(-i omega_n t_k).
// Unitary together with the (T/N) time weight: Parseval reads
// sum_k |x(t_k)|^2 (T/N) = sum_n |X(omega_n)|^2.
Eigen::VectorXcd to_time_domain(const FrequencyGrid& grid,
                                const Eigen::VectorXcd& spectral);

// Inverse of to_time_domain: X(omega_n) = (sqrt(T)/N) sum_k x(t_k) exp(+i omega_n t_k).
Eigen::VectorXcd from_time_domain(const FrequencyGrid& grid,
                                  const Eigen::VectorXcd& temporal);

// Uniform sampling of a continuous frequency interval, endpoints included.
struct ContinuousAxis {
  double center = 0;
  double half_span = 0;
  int n_points = 0;
  double spacing = 0; // 2*half_span / (n_points-1)

  double point(int i) const { return center - half_span + i * spacing; }
  Eigen::VectorXd points() const;
};

ContinuousAxis make_axis(double center, double half_span, int n_points);

} // namespace cavmode

#endif // CAVMODE_GRID_HPP
