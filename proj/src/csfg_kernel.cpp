#include "cavmode/csfg.hpp"
#include "cavmode/errors.hpp"
#include "pump_eval.hpp"

#include <cmath>
#include <vector>

namespace cavmode {

using cd = std::complex<double>;

namespace {

// 12-point Gauss-Legendre rule on [-1, 1] (line moments)
constexpr int kGlLine = 12;
constexpr double kGlLineX[kGlLine] = {
    -0.9815606342467192, -0.9041172563704749, -0.7699026741943047,
    -0.5873179542866175, -0.3678314989981802, -0.1252334085114689,
    0.1252334085114689,  0.3678314989981802,  0.5873179542866175,
    0.7699026741943047,  0.9041172563704749,  0.9815606342467192};
constexpr double kGlLineW[kGlLine] = {
    0.0471753363865118, 0.1069393259953184, 0.1600783285433462,
    0.2031674267230659, 0.2334925365383548, 0.2491470458134028,
    0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
    0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

// 8-point rule (nested triangle moments)
constexpr int kGlTri = 8;
constexpr double kGlTriX[kGlTri] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
    0.7966664774136267,  0.9602898564975363};
constexpr double kGlTriW[kGlTri] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

// Taylor order of e^{i w (t - tau_a)} within one fine cell. Input bins extend
// to |w| h < 2 pi / oversample (aliasing fold below), so order 11 (line) and
// 7 (triangle) keep the truncation near 1e-13.
constexpr int kLineOrder = 11;
constexpr int kTriOrder = 7;

struct LegDef {
  KernelLeg leg;
  double constant;  // sqrt(gamma) or sqrt(iota); 0 for the signal leg
  bool uses_beta;   // signal leg: h_s(t) = eta * beta(t)
};

} // namespace

std::complex<double> kernel_value(double t, double t_prime, KernelLeg leg,
                                  const QpgParams& p) {
  validate(p);
  if (p.pump.norm_mode != NormMode::TemporalUnit)
    throw ParameterError("kernel_value: pump must be TemporalUnit-normalized");
  const double T = p.grid.window_T;
  const double eps = 1e-12 * T;
  if (std::abs(t) > T / 2 + eps || std::abs(t_prime) > T / 2 + eps)
    throw ParameterError("kernel_value: time outside the observation window");
  if (leg == KernelLeg::Bath && !(p.internal_loss > 0))
    throw ParameterError("kernel_value: bath leg requires internal loss");

  detail::PumpEvaluator pe(p.grid, p.pump.spectral);
  const double geff = p.gamma + p.internal_loss;
  auto F = [&](double x) {
    return -(geff / 2) * x -
           (p.eta * p.eta / 2) * pe.cumulative_intensity(x);
  };
  const double f_full = F(T / 2) - F(-T / 2);
  const double efull = std::exp(f_full);
  const double prefactor = efull / (1 - efull);

  const double u = t >= t_prime ? 1.0 : 0.0; // right-continuous step
  cd h_leg;
  switch (leg) {
    case KernelLeg::Signal: h_leg = p.eta * pe.beta(t_prime); break;
    case KernelLeg::Idler: h_leg = std::sqrt(p.gamma); break;
    case KernelLeg::Bath: h_leg = std::sqrt(p.internal_loss); break;
  }
  return -(prefactor + u) * h_leg * std::exp(F(t) - F(t_prime));
}

TransferPair kernel_transfer(const QpgParams& p, const KernelOptions& opts) {
  validate(p);
  if (p.pump.norm_mode != NormMode::TemporalUnit)
    throw ParameterError("kernel_transfer: pump must be TemporalUnit-normalized");
  const int N = p.grid.n_modes;
  if (N > opts.max_modes)
    throw ParameterError(
        "kernel_transfer: n_modes exceeds the cap (raise KernelOptions::max_modes "
        "if the O(N^2) cost is acceptable)");
  if (opts.oversample < 4)
    throw ParameterError("kernel_transfer: oversample must be >= 4");

  const double T = p.grid.window_T;
  const int nf = opts.oversample * N;
  const double h = T / nf;
  const bool lossy = p.internal_loss > 0;
  const double geff = p.gamma + p.internal_loss;

  detail::PumpEvaluator pe(p.grid, p.pump.spectral);
  auto F = [&](double x) {
    return -(geff / 2) * x -
           (p.eta * p.eta / 2) * pe.cumulative_intensity(x);
  };
  const double f_full = F(T / 2) - F(-T / 2);
  const double efull = std::exp(f_full);
  const double prefactor = efull / (1 - efull); // the A of the kernel

  std::vector<LegDef> legs = {{KernelLeg::Signal, 0.0, true},
                              {KernelLeg::Idler, std::sqrt(p.gamma), false}};
  if (lossy) legs.push_back({KernelLeg::Bath, std::sqrt(p.internal_loss), false});
  const int nlegs = static_cast<int>(legs.size());

  // fixed in-cell node offsets, weights and powers
  double line_x[kGlLine], line_w[kGlLine];
  double line_pow[kGlLine][kLineOrder + 1];
  for (int g = 0; g < kGlLine; ++g) {
    line_x[g] = (kGlLineX[g] + 1) * h / 2;
    line_w[g] = kGlLineW[g] * h / 2;
    double pw = 1;
    for (int q = 0; q <= kLineOrder; ++q, pw *= line_x[g]) line_pow[g][q] = pw;
  }
  double tri_xo[kGlTri], tri_wo[kGlTri];
  double tri_xo_pow[kGlTri][kTriOrder + 1];
  double tri_y[kGlTri][kGlTri], tri_wi[kGlTri][kGlTri];
  double tri_y_pow[kGlTri][kGlTri][kTriOrder + 1];
  for (int o = 0; o < kGlTri; ++o) {
    tri_xo[o] = (kGlTriX[o] + 1) * h / 2;
    tri_wo[o] = kGlTriW[o] * h / 2;
    double pw = 1;
    for (int q = 0; q <= kTriOrder; ++q, pw *= tri_xo[o]) tri_xo_pow[o][q] = pw;
    for (int i = 0; i < kGlTri; ++i) {
      tri_y[o][i] = (kGlTriX[i] + 1) * tri_xo[o] / 2;
      tri_wi[o][i] = kGlTriW[i] * tri_xo[o] / 2;
      double pv = 1;
      for (int q = 0; q <= kTriOrder; ++q, pv *= tri_y[o][i])
        tri_y_pow[o][i][q] = pv;
    }
  }

  // per-cell moments of S(t) = e^F and q_leg(t) = h_leg(t) e^{-F}
  const int nq = kTriOrder + 1;
  Eigen::MatrixXcd ms = Eigen::MatrixXcd::Zero(nf, kLineOrder + 1);
  std::vector<Eigen::MatrixXcd> mq(nlegs);
  std::vector<Eigen::MatrixXcd> tri(nlegs); // cols: q*(kTriOrder+1)+p
  for (int l = 0; l < nlegs; ++l) {
    mq[l] = Eigen::MatrixXcd::Zero(nf, kLineOrder + 1);
    tri[l] = Eigen::MatrixXcd::Zero(nf, nq * nq);
  }

  auto leg_base = [&](const LegDef& l, double t) -> cd {
    return l.uses_beta ? cd(p.eta) * pe.beta(t) : cd(l.constant);
  };

  for (int a = 0; a < nf; ++a) {
    const double ta = -T / 2 + a * h;

    for (int g = 0; g < kGlLine; ++g) {
      const double t = ta + line_x[g];
      const double ft = F(t);
      const double s_val = std::exp(ft), e_val = std::exp(-ft);
      for (int q = 0; q <= kLineOrder; ++q)
        ms(a, q) += line_w[g] * s_val * line_pow[g][q];
      for (int l = 0; l < nlegs; ++l) {
        const cd qv = leg_base(legs[l], t) * e_val;
        for (int q = 0; q <= kLineOrder; ++q)
          mq[l](a, q) += line_w[g] * qv * line_pow[g][q];
      }
    }

    for (int o = 0; o < kGlTri; ++o) {
      const double t_out = ta + tri_xo[o];
      const double s_out = std::exp(F(t_out));
      // inner cumulative integrals of q_leg (t'-ta)^q over [ta, t_out]
      cd inner[3][kTriOrder + 1] = {};
      for (int i = 0; i < kGlTri; ++i) {
        const double t_in = ta + tri_y[o][i];
        const double e_in = std::exp(-F(t_in));
        for (int l = 0; l < nlegs; ++l) {
          const cd qv = leg_base(legs[l], t_in) * e_in;
          for (int q = 0; q <= kTriOrder; ++q)
            inner[l][q] += tri_wi[o][i] * qv * tri_y_pow[o][i][q];
        }
      }
      for (int l = 0; l < nlegs; ++l)
        for (int q = 0; q <= kTriOrder; ++q) {
          const cd iw = tri_wo[o] * s_out * inner[l][q];
          for (int pq = 0; pq <= kTriOrder; ++pq)
            tri[l](a, q * nq + pq) += iw * tri_xo_pow[o][pq];
        }
    }
  }

  // phase anchors e^{+- i w_n tau_a} and in-cell Taylor weights (i w)^k / k!
  Eigen::VectorXd omega(N);
  for (int j = 0; j < N; ++j) omega[j] = p.grid.omega(p.grid.index_of(j));
  Eigen::MatrixXcd phase_plus(nf, N);
  for (int a = 0; a < nf; ++a) {
    const double ta = -T / 2 + a * h;
    const cd z = std::polar(1.0, p.grid.bin_spacing * ta);
    cd pw = std::polar(1.0, p.grid.index_min() * p.grid.bin_spacing * ta);
    for (int j = 0; j < N; ++j) {
      phase_plus(a, j) = pw;
      pw *= z;
    }
  }
  Eigen::MatrixXcd vplus(N, kLineOrder + 1), vminus(N, kLineOrder + 1);
  for (int j = 0; j < N; ++j) {
    cd up = 1, um = 1;
    for (int q = 0; q <= kLineOrder; ++q) {
      vplus(j, q) = up;
      vminus(j, q) = um;
      up *= cd(0, omega[j]) / double(q + 1);
      um *= cd(0, -omega[j]) / double(q + 1);
    }
  }

  // line integrals per cell: I_S(a,n) = e^{i w_n ta} sum_q vplus(n,q) ms(a,q)
  Eigen::MatrixXcd i_s =
      (ms * vplus.transpose()).cwiseProduct(phase_plus);
  const Eigen::MatrixXcd phase_minus = phase_plus.conjugate();

  TransferPair tp;
  tp.params = p;
  tp.method = TransferMethod::Kernel;

  const double sqrt_gamma = std::sqrt(p.gamma);
  const Eigen::VectorXcd p_vec = i_s.colwise().sum();

  for (int l = 0; l < nlegs; ++l) {
    Eigen::MatrixXcd j_leg =
        (mq[l] * vminus.transpose()).cwiseProduct(phase_minus);
    const Eigen::VectorXcd q_vec = j_leg.colwise().sum();

    // prefix sums over cells: full-cell pairs with t-cell strictly after t'-cell
    Eigen::MatrixXcd csum(nf, N);
    csum.row(0).setZero();
    for (int a = 1; a < nf; ++a)
      csum.row(a) = csum.row(a - 1) + j_leg.row(a - 1);

    Eigen::MatrixXcd r = i_s.transpose() * csum;

    // diagonal cells: triangle moments with both phases anchored at tau_a
    for (int q = 0; q < nq; ++q) {
      Eigen::MatrixXcd wt =
          (tri[l].middleCols(q * nq, nq) * vplus.leftCols(nq).transpose())
              .cwiseProduct(phase_plus);
      r.noalias() +=
          (wt.transpose() * phase_minus) * vminus.col(q).asDiagonal();
    }

    Eigen::MatrixXcd g =
        -(sqrt_gamma / T) * (prefactor * (p_vec * q_vec.transpose()) + r);
    if (legs[l].leg == KernelLeg::Signal) tp.g_signal = std::move(g);
    else if (legs[l].leg == KernelLeg::Idler) {
      g += Eigen::MatrixXcd::Identity(N, N);
      tp.g_idler = std::move(g);
    } else tp.g_bath = std::move(g);
  }

  if (opts.check_unitarity) {
    if (!lossy) {
      const double res = unitarity_residual(tp);
      const double tol = opts.unitarity_tol * (100.0 / N) * (100.0 / N);
      if (!(res < tol))
        throw NumericalError(
            "kernel_transfer: row-unitarity residual " + std::to_string(res) +
            " exceeds tolerance; increase n_modes or the oversample factor");
    } else {
      const double lam = deficit_min_eigenvalue(tp);
      if (lam < -opts.psd_tol)
        throw NumericalError(
            "kernel_transfer: lossy deficit not positive semidefinite; "
            "increase n_modes or the oversample factor");
    }
  }
  return tp;
}

} // namespace cavmode
