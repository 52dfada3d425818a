#ifndef CAVMODE_PUMP_EVAL_HPP
#define CAVMODE_PUMP_EVAL_HPP

#include "cavmode/grid.hpp"

#include <Eigen/Dense>
#include <complex>

namespace cavmode::detail {

// Exact point evaluation of a grid pump between samples. The sampled pump is
// the trigonometric polynomial beta(t) = (1/sqrt(T)) sum_n beta_n e^{-i w_n t},
// so both beta(t) and the cumulative intensity int_0^t |beta|^2 have closed
// forms in terms of the bin amplitudes.
class PumpEvaluator {
public:
  PumpEvaluator(const FrequencyGrid& grid, const Eigen::VectorXcd& bins);

  std::complex<double> beta(double t) const;
  double beta_sq(double t) const { return std::norm(beta(t)); }

  // C(t) = int_0^t |beta(u)|^2 du (signed for t < 0)
  double cumulative_intensity(double t) const;

  double window() const { return T_; }

private:
  double T_;
  double dw_;
  int n_;
  int imin_;
  Eigen::VectorXcd bins_;
  Eigen::VectorXcd autocorr_; // c_k = sum_m beta_{m+k} conj(beta_m), k = 1..n-1
  double c0_;
};

} // namespace cavmode::detail

#endif // CAVMODE_PUMP_EVAL_HPP
