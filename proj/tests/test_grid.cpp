#include <doctest.h>

#include "cavmode/errors.hpp"
#include "cavmode/grid.hpp"
#include "cavmode/rng.hpp"

#include <cmath>
#include <complex>
#include <numbers>

using namespace cavmode;
using std::numbers::pi;

TEST_CASE("make_grid fixes bin spacing to 2 pi / T") {
  auto g = make_grid(2 * pi, 4);
  CHECK(g.bin_spacing == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.index_min() == -2);
  CHECK(g.index_max() == 1);
  CHECK(g.omega(0) == 0.0);

  auto g2 = make_grid(2 * pi * 100, 100);
  CHECK(g2.bin_spacing == doctest::Approx(0.01).epsilon(1e-14));

  auto g3 = make_grid(1.0, 100);
  CHECK(g3.bin_spacing == doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK(g3.sample_time(1) - g3.sample_time(0) == doctest::Approx(0.01));

  // stored product is exact, not merely approximate
  CHECK(g3.bin_spacing * g3.window_T == doctest::Approx(2 * pi).epsilon(1e-16));
}

TEST_CASE("make_grid rejects bad parameters") {
  CHECK_THROWS_AS(make_grid(0.0, 8), ParameterError);
  CHECK_THROWS_AS(make_grid(-1.0, 8), ParameterError);
  CHECK_THROWS_AS(make_grid(1.0, 7), ParameterError);
  CHECK_THROWS_AS(make_grid(1.0, 0), ParameterError);
}

TEST_CASE("constant spectral mode maps to constant time signal") {
  auto g = make_grid(3.7, 16);
  Eigen::VectorXcd spec = Eigen::VectorXcd::Zero(16);
  spec[g.offset(0)] = std::sqrt(g.window_T);
  auto x = to_time_domain(g, spec);
  for (int k = 0; k < 16; ++k) {
    CHECK(x[k].real() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(x[k].imag() == doctest::Approx(0.0).epsilon(1e-13));
  }

  auto zero = to_time_domain(g, Eigen::VectorXcd::Zero(16));
  CHECK(zero.norm() == 0.0);

  // all of a constant signal's energy sits in the zero-frequency bin
  auto back = from_time_domain(g, Eigen::VectorXcd::Ones(16));
  CHECK(std::abs(back[g.offset(0)]) ==
        doctest::Approx(std::sqrt(g.window_T)).epsilon(1e-13));
  back[g.offset(0)] = 0;
  CHECK(back.norm() < 1e-13);
}

TEST_CASE("single-frequency exponential lands in one bin") {
  auto g = make_grid(5.0, 12);
  Eigen::VectorXcd x(12);
  for (int k = 0; k < 12; ++k) {
    const double t = g.sample_time(k);
    x[k] = std::polar(1.0, -g.omega(1) * t);
  }
  auto spec = from_time_domain(g, x);
  CHECK(std::abs(spec[g.offset(1)]) ==
        doctest::Approx(std::sqrt(g.window_T)).epsilon(1e-13));
  spec[g.offset(1)] = 0;
  CHECK(spec.norm() < 1e-12);
}

TEST_CASE("transforms invert each other and preserve the weighted norm") {
  SplitMix64 rng(0x5eed);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 * (1 + static_cast<int>(rng.next() % 64));
    auto g = make_grid(0.5 + 4 * rng.uniform01(), n);
    Eigen::VectorXcd spec(n);
    for (int j = 0; j < n; ++j)
      spec[j] = std::complex<double>(2 * rng.uniform01() - 1,
                                     2 * rng.uniform01() - 1);

    auto x = to_time_domain(g, spec);
    auto round = from_time_domain(g, x);
    CHECK((round - spec).norm() / spec.norm() < 1e-12);

    auto round2 = to_time_domain(g, from_time_domain(g, x));
    CHECK((round2 - x).norm() / x.norm() < 1e-12);

    // Parseval with the (T/N) sample weight
    const double lhs = x.squaredNorm() * g.window_T / n;
    CHECK(lhs == doctest::Approx(spec.squaredNorm()).epsilon(1e-12));
  }
}

TEST_CASE("transform length mismatches are rejected") {
  auto g = make_grid(1.0, 8);
  CHECK_THROWS_AS(to_time_domain(g, Eigen::VectorXcd::Zero(7)), ParameterError);
  CHECK_THROWS_AS(from_time_domain(g, Eigen::VectorXcd::Zero(9)), ParameterError);
}

TEST_CASE("continuous axis is uniform and symmetric") {
  auto ax = make_axis(0.0, 2.5, 11);
  CHECK(ax.spacing == doctest::Approx(0.5));
  CHECK(ax.point(0) == doctest::Approx(-2.5));
  CHECK(ax.point(10) == doctest::Approx(2.5));
  CHECK(ax.point(5) == doctest::Approx(0.0));
  CHECK(ax.spacing * (ax.n_points - 1) == doctest::Approx(2 * ax.half_span));
  CHECK_THROWS_AS(make_axis(0.0, -1.0, 4), ParameterError);
  CHECK_THROWS_AS(make_axis(0.0, 1.0, 1), ParameterError);
}
