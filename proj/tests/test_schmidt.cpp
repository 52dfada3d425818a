#include <doctest.h>

#include "cavmode/errors.hpp"
#include "cavmode/rng.hpp"
#include "cavmode/schmidt.hpp"

#include <cmath>
#include <limits>

using namespace cavmode;

namespace {
Eigen::MatrixXcd random_matrix(int rows, int cols, SplitMix64& rng) {
  Eigen::MatrixXcd m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r)
      m(r, c) = std::complex<double>(2 * rng.uniform01() - 1,
                                     2 * rng.uniform01() - 1);
  return m;
}
} // namespace

TEST_CASE("rank-1 matrices have a single Schmidt mode") {
  SplitMix64 rng(42);
  auto u = random_matrix(24, 1, rng);
  auto v = random_matrix(17, 1, rng);
  Eigen::MatrixXcd a = u * v.adjoint();
  auto sd = schmidt(a);
  CHECK(sd.singular_values[1] / sd.singular_values[0] < 1e-12);
  CHECK(purity(sd) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("equal singular values split the weight evenly") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(2, 2) / std::sqrt(2.0);
  auto sd = schmidt(a);
  CHECK(sd.singular_values[0] == doctest::Approx(sd.singular_values[1]));
  CHECK(purity(sd) == doctest::Approx(0.5).epsilon(1e-14));

  Eigen::MatrixXcd b = Eigen::MatrixXcd::Identity(5, 5) * 0.3;
  CHECK(purity(schmidt(b)) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("SVD reconstruction and mode orthonormality on random input") {
  SplitMix64 rng(7);
  auto a = random_matrix(64, 64, rng);
  auto sd = schmidt(a);
  CHECK((sd.reconstruct() - a).norm() / a.norm() < 1e-10);
  CHECK((sd.modes_row.adjoint() * sd.modes_row -
         Eigen::MatrixXcd::Identity(64, 64))
            .norm() < 1e-10);
  CHECK((sd.modes_col.adjoint() * sd.modes_col -
         Eigen::MatrixXcd::Identity(64, 64))
            .norm() < 1e-10);
  CHECK(sd.source_norm == doctest::Approx(a.norm()));
  for (int k = 0; k + 1 < sd.singular_values.size(); ++k)
    CHECK(sd.singular_values[k] >= sd.singular_values[k + 1]);
}

TEST_CASE("gram-trace purity equals the Schmidt purity") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    auto a = random_matrix(40, 56, rng);
    CHECK(purity_gram(a) == doctest::Approx(purity(schmidt(a))).epsilon(1e-12));
  }
}

TEST_CASE("degenerate inputs are rejected") {
  Eigen::MatrixXcd nan_matrix = Eigen::MatrixXcd::Zero(3, 3);
  nan_matrix(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(schmidt(nan_matrix), DataError);

  auto sd = schmidt(Eigen::MatrixXcd::Zero(3, 3));
  CHECK_THROWS_AS(purity(sd), DataError);
  CHECK_THROWS_AS(purity_gram(Eigen::MatrixXcd::Zero(3, 3)), DataError);
}
