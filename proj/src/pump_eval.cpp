#include "pump_eval.hpp"

#include <cmath>

namespace cavmode::detail {

using cd = std::complex<double>;

PumpEvaluator::PumpEvaluator(const FrequencyGrid& grid,
                             const Eigen::VectorXcd& bins)
    : T_(grid.window_T),
      dw_(grid.bin_spacing),
      n_(grid.n_modes),
      imin_(grid.index_min()),
      bins_(bins) {
  autocorr_.resize(n_ - 1);
  for (int k = 1; k < n_; ++k) {
    cd acc = 0;
    for (int m = 0; m + k < n_; ++m) acc += bins_[m + k] * std::conj(bins_[m]);
    autocorr_[k - 1] = acc;
  }
  c0_ = bins_.squaredNorm();
}

cd PumpEvaluator::beta(double t) const {
  // geometric phase recurrence over bins: e^{-i w_n t} = z^n
  const cd z = std::polar(1.0, -dw_ * t);
  cd p = std::polar(1.0, -imin_ * dw_ * t);
  cd acc = 0;
  for (int j = 0; j < n_; ++j) {
    acc += bins_[j] * p;
    p *= z;
  }
  return acc / std::sqrt(T_);
}

double PumpEvaluator::cumulative_intensity(double t) const {
  // int_0^t e^{-i w_k u} du = (1 - e^{-i w_k t}) / (i w_k); conjugate pairs
  // for +-k fold into twice the real part.
  const cd z = std::polar(1.0, -dw_ * t);
  cd zk = z;
  double acc = c0_ * t;
  for (int k = 1; k < n_; ++k) {
    const cd term = autocorr_[k - 1] * (1.0 - zk) / cd(0.0, k * dw_);
    acc += 2.0 * term.real();
    zk *= z;
  }
  return acc / T_;
}

} // namespace cavmode::detail
