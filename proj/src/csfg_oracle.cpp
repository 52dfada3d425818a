#include "cavmode/csfg.hpp"
#include "cavmode/errors.hpp"
#include "pump_eval.hpp"

#include <cmath>
#include <vector>

namespace cavmode {

using cd = std::complex<double>;

namespace {

// One full-window RK4 pass of b' = -kappa(t) b - drive(t) storing the
// trajectory at every step node. kappa is sampled on the half-step lattice
// (index 2j for node j, 2j+1 for the midpoint).
struct Integrator {
  const std::vector<double>& kappa_half;
  int steps;
  double t0, h;

  template <typename DriveFn>
  void run(DriveFn&& drive, cd y0, std::vector<cd>& out) const {
    out.resize(steps + 1);
    cd y = y0;
    out[0] = y;
    for (int j = 0; j < steps; ++j) {
      const double t = t0 + j * h;
      const double k_a = kappa_half[2 * j];
      const double k_m = kappa_half[2 * j + 1];
      const double k_b = kappa_half[2 * j + 2];
      const cd d_a = drive(j, 0), d_m = drive(j, 1), d_b = drive(j, 2);
      const cd k1 = -k_a * y - d_a;
      const cd k2 = -k_m * (y + h / 2 * k1) - d_m;
      const cd k3 = -k_m * (y + h / 2 * k2) - d_m;
      const cd k4 = -k_b * (y + h * k3) - d_b;
      y += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      out[j + 1] = y;
      (void)t;
    }
  }
};

struct OracleRun {
  Eigen::MatrixXcd g_signal, g_idler, g_bath;
};

OracleRun run_oracle(const QpgParams& p, int steps_per_sample) {
  const int N = p.grid.n_modes;
  const double T = p.grid.window_T;
  const int steps = steps_per_sample * N;
  const double h = T / steps;
  const double t0 = -T / 2;
  const bool lossy = p.internal_loss > 0;

  detail::PumpEvaluator pe(p.grid, p.pump.spectral);

  // pump and damping on the half-step lattice
  std::vector<cd> beta_half(2 * steps + 1);
  std::vector<double> kappa_half(2 * steps + 1);
  const double geff = p.gamma + p.internal_loss;
  for (int i = 0; i <= 2 * steps; ++i) {
    const double t = t0 + i * (h / 2);
    beta_half[i] = pe.beta(t);
    kappa_half[i] = geff / 2 + (p.eta * p.eta / 2) * std::norm(beta_half[i]);
  }

  const Integrator integ{kappa_half, steps, t0, h};

  // homogeneous decay over one period (shared by all columns)
  std::vector<cd> hom;
  integ.run([](int, int) { return cd(0, 0); }, cd(1, 0), hom);
  const cd one_period = hom[steps];

  const double inv_sqrt_T = 1.0 / std::sqrt(T);
  const double sqrt_gamma = std::sqrt(p.gamma);

  OracleRun out;
  out.g_signal = Eigen::MatrixXcd::Zero(N, N);
  out.g_idler = Eigen::MatrixXcd::Zero(N, N);
  if (lossy) out.g_bath = Eigen::MatrixXcd::Zero(N, N);

  std::vector<cd> particular, traj(steps);
  std::vector<cd> phase_nodes(2 * steps + 1);

  enum Leg { kSignal, kIdler, kBath };
  const int nlegs = lossy ? 3 : 2;
  for (int leg = 0; leg < nlegs; ++leg) {
    for (int col = 0; col < N; ++col) {
      const double w_m = p.grid.omega(p.grid.index_of(col));
      // input a^in(t) = (1/sqrt(T)) e^{-i w_m t}: phase marched on half steps
      const cd step_half = std::polar(1.0, -w_m * h / 2);
      cd cur = std::polar(1.0, -w_m * t0);
      for (int i = 0; i <= 2 * steps; ++i) {
        phase_nodes[i] = cur;
        cur *= step_half;
      }
      auto drive = [&](int j, int sub) -> cd {
        const int i = 2 * j + sub;
        const cd base = phase_nodes[i] * inv_sqrt_T;
        switch (leg) {
          case kSignal: return p.eta * beta_half[i] * base;
          case kIdler: return sqrt_gamma * base;
          default: return std::sqrt(p.internal_loss) * base;
        }
      };
      integ.run(drive, cd(0, 0), particular);

      // periodic boundary: b(-T/2) = P(T/2) / (1 - homogeneous multiplier)
      const cd b0 = particular[steps] / (1.0 - one_period);
      for (int j = 0; j < steps; ++j) traj[j] = particular[j] + b0 * hom[j];

      // project sqrt(gamma) b(t) onto the bins (periodic trapezoid)
      for (int j = 0; j < steps; ++j) {
        const double t = t0 + j * h;
        const cd z = std::polar(1.0, p.grid.bin_spacing * t);
        cd pw = std::polar(1.0, p.grid.index_min() * p.grid.bin_spacing * t);
        const cd w_traj = traj[j] * (sqrt_gamma * inv_sqrt_T * h);
        for (int row = 0; row < N; ++row) {
          const cd add = w_traj * pw;
          pw *= z;
          switch (leg) {
            case kSignal: out.g_signal(row, col) += add; break;
            case kIdler: out.g_idler(row, col) += add; break;
            default: out.g_bath(row, col) += add; break;
          }
        }
      }
    }
  }
  out.g_idler += Eigen::MatrixXcd::Identity(N, N);
  return out;
}

double max_entry_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.size() == 0 && b.size() == 0) return 0;
  return (a - b).cwiseAbs().maxCoeff();
}

} // namespace

TransferPair oracle_transfer(const QpgParams& p, const OracleOptions& opts) {
  validate(p);
  if (p.pump.norm_mode != NormMode::TemporalUnit)
    throw ParameterError("oracle_transfer: pump must be TemporalUnit-normalized");
  if (p.grid.n_modes > 128)
    throw ParameterError("oracle_transfer: n_modes capped at 128 (O(N) ODE solves)");
  if (opts.steps_per_sample < 64)
    throw ParameterError("oracle_transfer: need >= 64 steps per time sample");

  const OracleRun coarse = run_oracle(p, opts.steps_per_sample);
  const OracleRun fine = run_oracle(p, 2 * opts.steps_per_sample);

  double drift = std::max(max_entry_diff(coarse.g_signal, fine.g_signal),
                          max_entry_diff(coarse.g_idler, fine.g_idler));
  if (p.internal_loss > 0)
    drift = std::max(drift, max_entry_diff(coarse.g_bath, fine.g_bath));
  if (!(drift < opts.richardson_tol))
    throw NumericalError(
        "oracle_transfer: step-halving disagreement " + std::to_string(drift) +
        " exceeds tolerance; increase steps_per_sample");

  TransferPair tp;
  tp.params = p;
  tp.method = TransferMethod::OdeOracle;
  tp.g_signal = fine.g_signal;
  tp.g_idler = fine.g_idler;
  tp.g_bath = fine.g_bath;
  return tp;
}

} // namespace cavmode
