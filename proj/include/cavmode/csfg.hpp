#ifndef CAVMODE_CSFG_HPP
#define CAVMODE_CSFG_HPP

#include "cavmode/grid.hpp"
#include "cavmode/pump.hpp"
#include "cavmode/schmidt.hpp"

#include <complex>
#include <cstdint>

namespace cavmode {

// Cavity-assisted sum-frequency gate configuration. The pump must live on the
// same grid and carry TemporalUnit normalization.
struct QpgParams {
  FrequencyGrid grid;
  double gamma = 0;
  double eta = 0;
  double internal_loss = 0; // iota
  PumpProfile pump;

  double gamma_over_dw() const { return gamma / grid.bin_spacing; }
};

void validate(const QpgParams& p);

enum class TransferMethod { Kernel, FlatAnalytic, Perturbative, OdeOracle };

// Frequency-domain transfer matrices from signal / idler (and, with loss,
// bath) inputs to the idler output, in the bin basis of the grid.
struct TransferPair {
  Eigen::MatrixXcd g_signal; // G_s
  Eigen::MatrixXcd g_idler;  // G_i
  Eigen::MatrixXcd g_bath;   // only populated when internal_loss > 0
  QpgParams params;
  TransferMethod method = TransferMethod::Kernel;
};

// || G_s G_s^+ + G_i G_i^+ - I ||_F / sqrt(N)
double unitarity_residual(const TransferPair& tp);

// smallest eigenvalue of I - G_s G_s^+ - G_i G_i^+ (must be >= 0 with loss)
double deficit_min_eigenvalue(const TransferPair& tp);

// rho_n = eta sqrt(gamma/T) / (i omega_n - gamma/2)
std::complex<double> perturbative_rho(int n, const QpgParams& p);

// true when |rho_0| <= 0.3, the soft validity boundary of the perturbative
// treatment (sin|rho| deviates from |rho| by >1.5% beyond it)
bool perturbative_regime(const QpgParams& p);

// First-order gate: G_i = diag(e^{i theta_n} cos|rho_n|) and
// G_s[n,m] = (rho_n/|rho_n|) sin|rho_n| beta(omega_{n-m}). The physical
// all-pass phase e^{i theta_n} = (i w + g/2)/(i w - g/2) is retained so the
// matrices are directly comparable with the Langevin solutions.
TransferPair perturbative_transfer(const QpgParams& p);

struct FlatPumpCoefficients {
  std::complex<double> mu; // signal -> idler-output gain of bin n
  std::complex<double> nu; // idler transmission of bin n
};

// Exact Heisenberg solution under the flat-pump condition |beta(t)|^2 = 1/T:
// mu_n = eta sqrt(gamma/T) / (i w_n - gamma/2 - eta^2/2T),
// nu_n = (i w_n + gamma/2 - eta^2/2T) / (i w_n - gamma/2 - eta^2/2T).
FlatPumpCoefficients flat_pump_coefficients(int n, const QpgParams& p);

// Transfer pair assembled from the flat-pump coefficients; requires a
// constant or random-flat pump (|beta(t)|^2 = 1/T).
TransferPair flat_analytic_transfer(const QpgParams& p);

struct LossyCoefficients {
  double mu;      // -2 eta sqrt(gamma T) / (gamma T + iota T + eta^2)
  double nu;      // (eta^2 - gamma T + iota T) / (gamma T + iota T + eta^2)
  double upsilon; // bath admixture; unitarity-consistent form by default
};

// Zero-bin coefficients in the eta ~ sqrt((gamma+iota) T) -> 0 regime.
// The default upsilon = -2 T sqrt(gamma iota) / (gamma T + iota T + eta^2)
// satisfies |mu|^2+|nu|^2+|upsilon|^2 = 1 exactly; `literal_upsilon`
// selects the dimensionally inconsistent published variant without the T.
LossyCoefficients lossy_coefficients(const QpgParams& p,
                                     bool literal_upsilon = false);

// A = exp(-(gamma T + eta^2)/2) / (1 - exp(-(gamma T + eta^2)/2))
double kernel_prefactor(const QpgParams& p);

enum class KernelLeg { Signal, Idler, Bath };

// Response kernel g_j(t,t') = -[A + u(t-t')] h_j(t') exp(f(t,t')) with
// h_s = eta beta, h_i = sqrt(gamma), h_d = sqrt(iota) and
// f(t,t') = -int_{t'}^{t} [(gamma+iota)/2 + eta^2 |beta|^2 / 2];
// u(0) = 1 (right-continuous step, matching the causal ODE response).
std::complex<double> kernel_value(double t, double t_prime, KernelLeg leg,
                                  const QpgParams& p);

struct KernelOptions {
  int oversample = 16; // fine cells per time sample
  int max_modes = 256; // documented N cap for the O(N^2 N_f) build
  // Lossless row-unitarity gate on ||...||_F / sqrt(N), quoted at N = 100.
  // The window-truncation deficit of the exact N-bin block scales as 1/N^2,
  // so the enforced bound is unitarity_tol * (100/N)^2.
  double unitarity_tol = 1e-6;
  double psd_tol = 1e-9; // lossy deficit PSD gate (min eigenvalue > -tol)
  bool check_unitarity = true;
};

// Double Fourier transform of the response kernel,
// G_s = sqrt(gamma) g~_s, G_i = sqrt(gamma) g~_i + I, on the grid bins.
TransferPair kernel_transfer(const QpgParams& p, const KernelOptions& opts = {});

struct OracleOptions {
  int steps_per_sample = 384;   // RK4 steps per time sample (>= 64)
  double richardson_tol = 1e-8; // max entry drift allowed on step halving
};

// Brute-force check: drive the Heisenberg-Langevin cavity equation with each
// frequency-bin basis input, integrate with fixed-step RK4, resolve the
// periodic boundary condition through the one-period propagator, and project
// the output back onto the bins.
TransferPair oracle_transfer(const QpgParams& p, const OracleOptions& opts = {});

struct QpgMetrics {
  double separability = 0;          // lambda_0^2 / sum_k lambda_k^2 of G_s
  double conversion_efficiency = 0; // lambda_0^2
  double fidelity_to_pump = 0;      // |<phi_0, beta>|^2, time domain
  double unitarity_residual = 0;
  SchmidtDecomposition schmidt;
};

QpgMetrics qpg_metrics(const TransferPair& tp, const PumpProfile& pump);

// N_max = floor(F * gamma_over_dw_target): how many bins a target temporal
// mode can span before the pump bandwidth collides with the cavity FSR.
long long finesse_capacity(double finesse, double gamma_over_dw_target);

} // namespace cavmode

#endif // CAVMODE_CSFG_HPP
