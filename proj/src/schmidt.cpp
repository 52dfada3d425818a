#include "cavmode/schmidt.hpp"
#include "cavmode/errors.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace cavmode {

Eigen::MatrixXcd SchmidtDecomposition::reconstruct() const {
  return modes_row * singular_values.asDiagonal() * modes_col.adjoint();
}

SchmidtDecomposition schmidt(const Eigen::MatrixXcd& matrix) {
  if (matrix.size() == 0) throw DataError("schmidt: empty matrix");
  if (!matrix.allFinite()) throw DataError("schmidt: NaN/Inf entries");

  SchmidtDecomposition sd;
  sd.source_norm = matrix.norm();
  if (matrix.rows() >= 32 && matrix.cols() >= 32) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(matrix,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
    sd.singular_values = svd.singularValues();
    sd.modes_row = svd.matrixU();
    sd.modes_col = svd.matrixV();
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix,
                                           Eigen::ComputeThinU | Eigen::ComputeThinV);
    sd.singular_values = svd.singularValues();
    sd.modes_row = svd.matrixU();
    sd.modes_col = svd.matrixV();
  }
  return sd;
}

double purity(const SchmidtDecomposition& sd) {
  double sum2 = 0, sum4 = 0;
  for (int k = 0; k < sd.singular_values.size(); ++k) {
    const double l2 = sd.singular_values[k] * sd.singular_values[k];
    sum2 += l2;
    sum4 += l2 * l2;
  }
  if (sum2 == 0) throw DataError("purity: all singular values are zero");
  // rounding can push the ratio a few ulp past 1
  return std::min(1.0, sum4 / (sum2 * sum2));
}

double purity_gram(const Eigen::MatrixXcd& matrix) {
  if (!matrix.allFinite()) throw DataError("purity_gram: NaN/Inf entries");
  const double sum2 = matrix.squaredNorm();
  if (sum2 == 0) throw DataError("purity_gram: zero matrix");
  // Tr[(A^dagger A)^2] = ||A A^dagger||_F^2
  const Eigen::MatrixXcd gram = matrix * matrix.adjoint();
  return std::min(1.0, gram.squaredNorm() / (sum2 * sum2));
}

} // namespace cavmode
