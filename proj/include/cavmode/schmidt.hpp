#ifndef CAVMODE_SCHMIDT_HPP
#define CAVMODE_SCHMIDT_HPP

#include <Eigen/Dense>

namespace cavmode {

// Singular-value decomposition of a joint spectral function or transfer
// matrix: A = modes_row * diag(singular_values) * modes_col^dagger.
struct SchmidtDecomposition {
  Eigen::VectorXd singular_values; // descending, >= 0
  Eigen::MatrixXcd modes_row;      // output-side modes (columns, orthonormal)
  Eigen::MatrixXcd modes_col;      // input-side modes (columns, orthonormal)
  double source_norm = 0;          // Frobenius norm of the decomposed matrix

  Eigen::MatrixXcd reconstruct() const;
};

// Full SVD. Throws DataError on NaN/Inf entries.
SchmidtDecomposition schmidt(const Eigen::MatrixXcd& matrix);

// p = sum lambda^4 / (sum lambda^2)^2, the purity of either reduced state.
double purity(const SchmidtDecomposition& sd);

// Same quantity via Tr[(A^dagger A)^2] / Tr[A^dagger A]^2, no SVD required.
double purity_gram(const Eigen::MatrixXcd& matrix);

} // namespace cavmode

#endif // CAVMODE_SCHMIDT_HPP
