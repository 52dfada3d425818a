#include <doctest.h>

#include "cavmode/cspdc.hpp"
#include "cavmode/errors.hpp"

#include <cmath>
#include <numbers>

using namespace cavmode;
using std::numbers::pi;

namespace {

// independent full-line quadrature of |f(w)|^2 via w = s*tan(theta)
template <typename F>
double line_quadrature(F&& f, double scale, int n = 4000) {
  const double h = pi / n;
  double acc = 0;
  for (int k = 0; k < n; ++k) {
    const double th = -pi / 2 + (k + 0.5) * h;
    const double w = scale * std::tan(th);
    const double c = std::cos(th);
    acc += std::norm(f(w)) * scale / (c * c) * h;
  }
  return acc;
}

CavityParams cav(double gamma, double loss = 0,
                 CavityLabel label = CavityLabel::Signal) {
  CavityParams c;
  c.gamma = gamma;
  c.internal_loss = loss;
  c.label = label;
  return c;
}

} // namespace

TEST_CASE("lineshape values and norms") {
  const double g = 0.63;
  auto c = cav(g);

  // xi^-(0) = -(2/gamma) sqrt(gamma/2pi)
  auto v = lineshape(0.0, c, -1);
  CHECK(v.real() == doctest::Approx(-(2 / g) * std::sqrt(g / (2 * pi))).epsilon(1e-14));
  CHECK(v.imag() == 0.0);

  // |xi^-|^2 integrates to 1 (and to gamma/(gamma+iota) with loss)
  CHECK(line_quadrature([&](double w) { return lineshape(w, c, -1); }, g) ==
        doctest::Approx(1.0).epsilon(1e-6));
  auto lossy = cav(g, 0.3 * g);
  CHECK(line_quadrature([&](double w) { return lineshape(w, lossy, -1); },
                        g * 1.3) == doctest::Approx(1.0 / 1.3).epsilon(1e-6));

  // the lossless input-output ratio is a pure phase
  for (double w : {0.0, g, 10 * g}) {
    const auto ratio = lineshape(w, c, -1) / lineshape(w, c, +1);
    CHECK(std::abs(ratio) == doctest::Approx(1.0).epsilon(1e-13));
  }

  CHECK_THROWS_AS(lineshape(0.0, lossy, +1), ParameterError);
  CHECK_THROWS_AS(lineshape(0.0, cav(-1.0), -1), ParameterError);
  CHECK_THROWS_AS(lineshape(0.0, cav(1.0, 1.5), -1), ParameterError);
}

TEST_CASE("dual-cavity JSF with an unbounded pump is exactly separable") {
  const double g = 0.2;
  auto ax = make_axis(0.0, 50 * g, 128);
  auto pump_ax = make_axis(0.0, 1.0, 8);
  auto pump = rectangular_pump(pump_ax, std::numeric_limits<double>::infinity());
  auto jsf = build_jsf_dual(ax, ax, cav(g), cav(g, 0, CavityLabel::Idler),
                            pump, 0.01);
  auto sd = schmidt(jsf.values);
  CHECK(sd.singular_values[1] / sd.singular_values[0] < 1e-12);
  CHECK(purity(sd) == doctest::Approx(1.0).epsilon(1e-10));

  auto zero = build_jsf_dual(ax, ax, cav(g), cav(g), pump, 0.0);
  CHECK(zero.values.norm() == 0.0);

  auto hg = hermite_gauss_pump_continuum(2, 1.0);
  CHECK_THROWS_AS(build_jsf_dual(ax, ax, cav(g), cav(g), hg, 0.01),
                  ParameterError);
}

TEST_CASE("dual-cavity purity rises monotonically with pump bandwidth") {
  const double g = 0.1 * 2 * pi;
  auto ax = make_axis(0.0, 50 * g, 192);
  double last = 0;
  for (double ratio : {2.0, 5.0, 10.0, 30.0, 100.0}) {
    auto pump_ax = make_axis(0.0, ratio * g, 8);
    auto pump = rectangular_pump(pump_ax, ratio * g);
    auto jsf = build_jsf_dual(ax, ax, cav(g), cav(g), pump, 0.01);
    const double p = purity_gram(jsf.values);
    CHECK(p >= last - 1e-12);
    last = p;
  }
  CHECK(last > 0.99);
}

TEST_CASE("single-cavity JSF: separable variant and pump-limit behavior") {
  const double gs = 0.004 * 2 * pi;
  const double sigma = 25 * gs;
  auto ax_s = make_axis(0.0, 50 * gs, 96);
  auto ax_i = make_axis(0.0, 8 * sigma, 384);
  auto pump = hermite_gauss_pump_continuum(2, sigma);

  auto ideal = build_jsf_single(ax_s, ax_i, cav(gs), pump, 0.01,
                                SingleCavityApproximation::BetaOfIdler);
  auto sd = schmidt(ideal.values);
  CHECK(sd.singular_values[1] / sd.singular_values[0] < 1e-12);

  // idler marginal inherits the double-lobed Hermite-Gauss amplitude:
  // two interior dips at the polynomial roots
  Eigen::VectorXd marginal(ax_i.n_points);
  for (int b = 0; b < ax_i.n_points; ++b)
    marginal[b] = ideal.values.col(b).norm();
  const double peak = marginal.maxCoeff();
  int deep_dips = 0;
  for (int b = 1; b + 1 < ax_i.n_points; ++b)
    if (marginal[b] < marginal[b - 1] && marginal[b] < marginal[b + 1] &&
        marginal[b] < 0.12 * peak)
      ++deep_dips;
  CHECK(deep_dips == 2);

  // BetaOfSum converges to the separable limit as gamma_s / sigma -> 0
  double last = 0;
  for (double ratio : {1e-1, 1e-2, 1e-3}) {
    const double gamma_s = ratio * sigma;
    auto axs = make_axis(0.0, 50 * gamma_s, 128);
    auto axi = make_axis(0.0, 8 * sigma, 128);
    auto jsf = build_jsf_single(axs, axi, cav(gamma_s), pump, 0.01,
                                SingleCavityApproximation::BetaOfSum);
    const double p = purity_gram(jsf.values);
    CHECK(p > last);
    last = p;
  }
  CHECK(1 - last < 5e-4);
}

TEST_CASE("pair metrics: closed forms, quadrature and loss scalings") {
  const double g = 0.1 * 2 * pi, eta = 0.01;
  auto ax = make_axis(0.0, 50 * g, 64);
  auto pump_ax = make_axis(0.0, 1.0, 8);
  auto pump = rectangular_pump(pump_ax, std::numeric_limits<double>::infinity());

  SUBCASE("lossless") {
    auto jsf = build_jsf_dual(ax, ax, cav(g), cav(g), pump, eta);
    auto m = pair_metrics(jsf);
    CHECK(m.p_si == doctest::Approx(2 * pi * eta * eta).epsilon(1e-12));
    CHECK(m.heralding_s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(m.p_si_quadrature - m.p_si) / m.p_si < 1e-4);
    CHECK(m.linewidth_s == doctest::Approx(g));
  }

  SUBCASE("equal loss iota/gamma = 1 on both arms") {
    auto jsf = build_jsf_dual(ax, ax, cav(g, g), cav(g, g), pump, eta);
    auto m = pair_metrics(jsf);
    CHECK(m.p_si == doctest::Approx(2 * pi * eta * eta / 4).epsilon(1e-12));
    CHECK(m.heralding_s == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.heralding_i == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(m.linewidth_s / g == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(m.p_si_quadrature - m.p_si) / m.p_si < 1e-4);
  }

  SUBCASE("heralding depends only on the opposite arm") {
    double first = -1;
    for (double loss_s : {0.0, 0.2 * g, 0.5 * g}) {
      auto jsf = build_jsf_dual(ax, ax, cav(g, loss_s), cav(g, 0.3 * g), pump, eta);
      auto m = pair_metrics(jsf);
      if (first < 0) first = m.heralding_s;
      CHECK(m.heralding_s == doctest::Approx(first).epsilon(1e-12));
    }
  }

  SUBCASE("eta = 0 flags degenerate metrics") {
    auto jsf = build_jsf_dual(ax, ax, cav(g), cav(g), pump, 0.0);
    auto m = pair_metrics(jsf);
    CHECK(m.degenerate);
    CHECK(m.p_si == 0.0);
    CHECK(std::isnan(m.heralding_s));
  }
}

TEST_CASE("two-mode squeezer coefficients") {
  auto s0 = squeezer_outputs(0.0);
  CHECK(s0.cosh_gain == 1.0);
  CHECK(s0.sinh_gain == 0.0);
  CHECK(s0.vacuum_amplitude == 1.0);

  for (double eta : {0.01, 0.1, 0.3}) {
    auto s = squeezer_outputs(eta);
    CHECK(s.cosh_gain * s.cosh_gain - s.sinh_gain * s.sinh_gain ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  auto s = squeezer_outputs(0.01);
  CHECK(s.biphoton_amplitude == doctest::Approx(-std::sqrt(2 * pi) * 0.01));
  CHECK(s.biphoton_amplitude * s.biphoton_amplitude ==
        doctest::Approx(2 * pi * 1e-4).epsilon(1e-12));
  CHECK(s.truncation_valid);

  auto big = squeezer_outputs(1.0);
  CHECK_FALSE(big.truncation_valid);
}

TEST_CASE("feasibility window report") {
  auto c = cav(0.1 * 2 * pi);
  c.fsr = 100 * 2 * pi;
  auto r = feasibility_window(c, 5 * 2 * pi, 1 * 2 * pi);
  CHECK(r.satisfied);
  CHECK(r.finesse == doctest::Approx(1000.0));

  auto c2 = cav(2 * 2 * pi);
  c2.fsr = 100 * 2 * pi;
  CHECK_FALSE(feasibility_window(c2, 5 * 2 * pi, 1 * 2 * pi).satisfied);

  auto c3 = cav(0.1 * 2 * pi);
  c3.fsr = 3 * 2 * pi;
  auto r3 = feasibility_window(c3, 5 * 2 * pi, 1 * 2 * pi);
  CHECK_FALSE(r3.fsr_covers_spdc);
  CHECK_FALSE(r3.satisfied);
}

TEST_CASE("purity is stable under axis refinement") {
  const double g = 0.1 * 2 * pi;
  auto pump_ax = make_axis(0.0, 20 * g, 8);
  auto pump = rectangular_pump(pump_ax, 30 * g);
  double purities[2];
  int idx = 0;
  for (int points : {256, 512}) {
    auto ax = make_axis(0.0, 50 * g, points);
    auto jsf = build_jsf_dual(ax, ax, cav(g), cav(g), pump, 0.01);
    purities[idx++] = purity_gram(jsf.values);
  }
  CHECK(std::abs(purities[1] - purities[0]) < 1e-4);
}

TEST_CASE("pair metrics requires the dual-cavity closed forms") {
  auto pump = hermite_gauss_pump_continuum(0, 1.0);
  auto ax = make_axis(0.0, 5.0, 32);
  auto jsf = build_jsf_single(ax, ax, cav(0.1), pump, 0.01,
                              SingleCavityApproximation::BetaOfIdler);
  CHECK_THROWS_AS(pair_metrics(jsf), ParameterError);
}
