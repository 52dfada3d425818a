#include "cavmode/csfg.hpp"
#include "cavmode/errors.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

namespace cavmode {

using std::numbers::pi;
using cd = std::complex<double>;

void validate(const QpgParams& p) {
  if (!(p.gamma > 0)) throw ParameterError("QpgParams: gamma must be positive");
  if (p.eta < 0) throw ParameterError("QpgParams: eta must be >= 0");
  if (p.internal_loss < 0) throw ParameterError("QpgParams: internal_loss must be >= 0");
  if (!p.pump.is_grid_based() || !(*p.pump.grid == p.grid))
    throw ParameterError("QpgParams: pump must live on the same grid");
}

double unitarity_residual(const TransferPair& tp) {
  const int n = tp.g_idler.rows();
  Eigen::MatrixXcd acc = tp.g_signal * tp.g_signal.adjoint() +
                         tp.g_idler * tp.g_idler.adjoint();
  acc -= Eigen::MatrixXcd::Identity(n, n);
  return acc.norm() / std::sqrt(static_cast<double>(n));
}

double deficit_min_eigenvalue(const TransferPair& tp) {
  const int n = tp.g_idler.rows();
  Eigen::MatrixXcd deficit = Eigen::MatrixXcd::Identity(n, n) -
                             tp.g_signal * tp.g_signal.adjoint() -
                             tp.g_idler * tp.g_idler.adjoint();
  deficit = ((deficit + deficit.adjoint()) / 2.0).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(deficit,
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

namespace {
// bin differences live on the periodic window: wrap into [-N/2, N/2-1]
int wrap_shift(const FrequencyGrid& g, int k) {
  if (k < g.index_min()) return k + g.n_modes;
  if (k > g.index_max()) return k - g.n_modes;
  return k;
}
} // namespace

std::complex<double> perturbative_rho(int n, const QpgParams& p) {
  validate(p);
  const double w = p.grid.omega(n);
  return p.eta * std::sqrt(p.gamma / p.grid.window_T) / cd(-p.gamma / 2, w);
}

bool perturbative_regime(const QpgParams& p) {
  return std::abs(perturbative_rho(0, p)) <= 0.3;
}

TransferPair perturbative_transfer(const QpgParams& p) {
  validate(p);
  if (p.pump.norm_mode != NormMode::TemporalUnit)
    throw ParameterError("perturbative_transfer: pump must be TemporalUnit-normalized");
  const int n = p.grid.n_modes;

  TransferPair tp;
  tp.params = p;
  tp.method = TransferMethod::Perturbative;
  tp.g_signal = Eigen::MatrixXcd::Zero(n, n);
  tp.g_idler = Eigen::MatrixXcd::Zero(n, n);

  for (int jn = 0; jn < n; ++jn) {
    const int bn = p.grid.index_of(jn);
    const double w = p.grid.omega(bn);
    const cd rho = perturbative_rho(bn, p);
    const double mag = std::abs(rho);
    // all-pass cavity phase of the idler channel
    const cd theta = cd(p.gamma / 2, w) / cd(-p.gamma / 2, w);
    tp.g_idler(jn, jn) = theta * std::cos(mag);
    const cd dir = mag > 0 ? rho / mag : cd(1, 0);
    const cd gain = dir * std::sin(mag);
    for (int jm = 0; jm < n; ++jm) {
      const cd b =
          p.pump.spectral_bin(wrap_shift(p.grid, bn - p.grid.index_of(jm)));
      if (b != 0.0) tp.g_signal(jn, jm) = gain * b;
    }
  }
  return tp;
}

FlatPumpCoefficients flat_pump_coefficients(int n, const QpgParams& p) {
  validate(p);
  const double w = p.grid.omega(n);
  const double shift = p.gamma / 2 + p.eta * p.eta / (2 * p.grid.window_T);
  const cd den(-shift, w);
  FlatPumpCoefficients c;
  c.mu = p.eta * std::sqrt(p.gamma / p.grid.window_T) / den;
  c.nu = cd(p.gamma / 2 - p.eta * p.eta / (2 * p.grid.window_T), w) / den;
  return c;
}

TransferPair flat_analytic_transfer(const QpgParams& p) {
  validate(p);
  if (p.pump.kind != PumpKind::Constant && p.pump.kind != PumpKind::RandomFlat)
    throw ParameterError(
        "flat_analytic_transfer: requires a constant or random-flat pump "
        "(|beta(t)|^2 = 1/T)");
  if (p.internal_loss != 0)
    throw ParameterError("flat_analytic_transfer: lossless form only");
  const int n = p.grid.n_modes;

  TransferPair tp;
  tp.params = p;
  tp.method = TransferMethod::FlatAnalytic;
  tp.g_signal = Eigen::MatrixXcd::Zero(n, n);
  tp.g_idler = Eigen::MatrixXcd::Zero(n, n);
  for (int jn = 0; jn < n; ++jn) {
    const int bn = p.grid.index_of(jn);
    const auto c = flat_pump_coefficients(bn, p);
    tp.g_idler(jn, jn) = c.nu;
    for (int jm = 0; jm < n; ++jm) {
      const cd b =
          p.pump.spectral_bin(wrap_shift(p.grid, bn - p.grid.index_of(jm)));
      if (b != 0.0) tp.g_signal(jn, jm) = c.mu * b;
    }
  }
  return tp;
}

LossyCoefficients lossy_coefficients(const QpgParams& p, bool literal_upsilon) {
  validate(p);
  const double T = p.grid.window_T;
  const double gT = p.gamma * T, iT = p.internal_loss * T, e2 = p.eta * p.eta;
  const double den = gT + iT + e2;
  if (!(den > 0)) throw ParameterError("lossy_coefficients: degenerate denominator");
  LossyCoefficients c;
  c.mu = -2 * p.eta * std::sqrt(gT) / den;
  c.nu = (e2 - gT + iT) / den;
  const double root = std::sqrt(p.gamma * p.internal_loss);
  c.upsilon = literal_upsilon ? -2 * root / den : -2 * T * root / den;
  return c;
}

double kernel_prefactor(const QpgParams& p) {
  validate(p);
  const double x = (p.gamma * p.grid.window_T + p.eta * p.eta) / 2;
  if (!(x > 0)) throw NumericalError("kernel_prefactor: gamma*T + eta^2 must be positive");
  const double e = std::exp(-x);
  return e / (1 - e);
}

long long finesse_capacity(double finesse, double gamma_over_dw_target) {
  if (!(finesse > 0)) throw ParameterError("finesse_capacity: finesse must be positive");
  if (gamma_over_dw_target < 0)
    throw ParameterError("finesse_capacity: ratio must be >= 0");
  return static_cast<long long>(std::floor(finesse * gamma_over_dw_target));
}

} // namespace cavmode
