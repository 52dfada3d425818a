#include <doctest.h>

#include "cavmode/csfg.hpp"
#include "cavmode/errors.hpp"

#include <cmath>
#include <numbers>

using namespace cavmode;
using std::numbers::pi;

namespace {

QpgParams constant_params(double gamma_over_dw, int n, double T = 1.0,
                          double eta = -1) {
  QpgParams p;
  p.grid = make_grid(T, n);
  p.gamma = gamma_over_dw * p.grid.bin_spacing;
  p.eta = eta < 0 ? std::sqrt(p.gamma * T) : eta;
  p.pump = constant_pump(p.grid);
  return p;
}

QpgParams hg2_params(double gamma_over_dw, int n, double T = 1.0,
                     double eta = -1) {
  QpgParams p;
  p.grid = make_grid(T, n);
  p.gamma = gamma_over_dw * p.grid.bin_spacing;
  p.eta = eta < 0 ? std::sqrt(p.gamma * T) : eta;
  p.pump = hermite_gauss_pump(p.grid, 2, n / 16.0 * p.grid.bin_spacing);
  return p;
}

} // namespace

TEST_CASE("kernel point values: equal times, constant-pump exponent") {
  auto p = constant_params(0.05, 32);
  const double T = p.grid.window_T;
  const double prefactor = kernel_prefactor(p);

  // t = t': empty exponent, u(0) = 1 by the right-continuous convention
  const double t = 0.31 * T / 2;
  auto gi = kernel_value(t, t, KernelLeg::Idler, p);
  CHECK(gi.real() ==
        doctest::Approx(-(prefactor + 1) * std::sqrt(p.gamma)).epsilon(1e-12));
  CHECK(gi.imag() == doctest::Approx(0.0));

  auto gs = kernel_value(t, t, KernelLeg::Signal, p);
  CHECK(gs.real() == doctest::Approx(-(prefactor + 1) * p.eta / std::sqrt(T))
                         .epsilon(1e-12));

  // constant pump: f(t,t') = -(gamma/2 + eta^2/2T)(t - t') exactly
  const double kappa = p.gamma / 2 + p.eta * p.eta / (2 * T);
  const double t1 = -0.4 * T / 2, t2 = 0.35 * T / 2;
  auto above = kernel_value(t2, t1, KernelLeg::Idler, p);
  CHECK(std::abs(above) ==
        doctest::Approx((prefactor + 1) * std::sqrt(p.gamma) *
                        std::exp(-kappa * (t2 - t1)))
            .epsilon(1e-12));
  auto below = kernel_value(t1, t2, KernelLeg::Idler, p);
  CHECK(std::abs(below) == doctest::Approx(prefactor * std::sqrt(p.gamma) *
                                           std::exp(kappa * (t2 - t1)))
                               .epsilon(1e-12));

  CHECK_THROWS_AS(kernel_value(T, 0.0, KernelLeg::Idler, p), ParameterError);
  CHECK_THROWS_AS(kernel_value(0.0, 0.0, KernelLeg::Bath, p), ParameterError);
}

TEST_CASE("kernel transfer reproduces the flat-pump diagonals to 1e-10") {
  for (double r : {0.01, 0.1}) {
    auto p = constant_params(r, 64);
    auto tp = kernel_transfer(p);
    CHECK(tp.method == TransferMethod::Kernel);

    double max_offdiag = 0, max_diag_err = 0;
    for (int j = 0; j < 64; ++j) {
      const auto c = flat_pump_coefficients(p.grid.index_of(j), p);
      max_diag_err = std::max(max_diag_err, std::abs(tp.g_signal(j, j) - c.mu));
      max_diag_err = std::max(max_diag_err, std::abs(tp.g_idler(j, j) - c.nu));
      for (int k = 0; k < 64; ++k) {
        if (k == j) continue;
        max_offdiag = std::max(max_offdiag, std::abs(tp.g_signal(j, k)));
        max_offdiag = std::max(max_offdiag, std::abs(tp.g_idler(j, k)));
      }
    }
    CHECK(max_diag_err < 1e-10);
    CHECK(max_offdiag < 1e-10);
  }
}

TEST_CASE("kernel transfer without interaction is the passive cavity") {
  auto p = constant_params(0.05, 32, 1.0, 0.0);
  auto tp = kernel_transfer(p);
  CHECK(tp.g_signal.norm() < 1e-10);
  for (int j = 0; j < 32; ++j) {
    const auto c = flat_pump_coefficients(p.grid.index_of(j), p);
    CHECK(std::abs(tp.g_idler(j, j) - c.nu) < 1e-10);
    CHECK(std::abs(std::abs(tp.g_idler(j, j)) - 1.0) < 1e-10);
  }
}

TEST_CASE("kernel transfer with a shaped pump: unitary rows, pump-shaped gain") {
  auto p = hg2_params(0.01, 100, 1.0, std::sqrt(2 * pi * 1e-2));
  auto tp = kernel_transfer(p);

  CHECK(unitarity_residual(tp) < 1e-6);

  // the central output row inherits the pump's spectral shape
  const int c = p.grid.offset(0);
  Eigen::VectorXd row(100), pump_shape(100);
  for (int m = 0; m < 100; ++m) {
    row[m] = std::abs(tp.g_signal(c, m));
    pump_shape[m] = std::abs(p.pump.spectral_bin(-p.grid.index_of(m)));
  }
  const double cosine =
      row.dot(pump_shape) / (row.norm() * pump_shape.norm());
  CHECK(cosine > 0.999);
}

TEST_CASE("kernel transfer agrees with the perturbative gate at small coupling") {
  auto p = hg2_params(0.01, 64);
  // |rho_0| = 2 eta / sqrt(gamma T) = 0.05
  p.eta = 0.05 * std::sqrt(p.gamma * p.grid.window_T) / 2;

  auto pert = perturbative_transfer(p);
  auto kern = kernel_transfer(p);
  const double num = std::sqrt((pert.g_signal - kern.g_signal).squaredNorm() +
                               (pert.g_idler - kern.g_idler).squaredNorm());
  const double den = std::sqrt(kern.g_signal.squaredNorm() +
                               kern.g_idler.squaredNorm());
  CHECK(num / den < 1e-3);
}

TEST_CASE("lossy kernel transfer: PSD deficit accounted for by the bath leg") {
  auto p = hg2_params(0.05, 32);
  p.internal_loss = 0.3 * p.gamma;
  auto tp = kernel_transfer(p);
  REQUIRE(tp.g_bath.size() > 0);

  // bath leg of the kernel carries sqrt(iota), decays with (gamma+iota)/2
  const double t = 0.2 * p.grid.window_T / 2;
  auto gb = kernel_value(t, t, KernelLeg::Bath, p);
  auto gi = kernel_value(t, t, KernelLeg::Idler, p);
  CHECK(std::abs(gb / gi) ==
        doctest::Approx(std::sqrt(p.internal_loss / p.gamma)).epsilon(1e-12));

  CHECK(deficit_min_eigenvalue(tp) > -1e-9);

  // the bath leg carries the loss-induced deficit; the remainder is the
  // window-truncation leak, which is orders of magnitude smaller here
  const int n = 32;
  Eigen::MatrixXcd deficit = Eigen::MatrixXcd::Identity(n, n) -
                             tp.g_signal * tp.g_signal.adjoint() -
                             tp.g_idler * tp.g_idler.adjoint();
  CHECK((deficit - tp.g_bath * tp.g_bath.adjoint()).norm() /
            std::max(deficit.norm(), 1e-30) <
        1e-4);
}

TEST_CASE("kernel transfer guards its preconditions") {
  auto p = constant_params(0.05, 32);
  KernelOptions opts;
  opts.max_modes = 16;
  CHECK_THROWS_AS(kernel_transfer(p, opts), ParameterError);

  KernelOptions bad;
  bad.oversample = 2;
  CHECK_THROWS_AS(kernel_transfer(p, bad), ParameterError);
}
