#pragma once

#include <Eigen/Dense>

namespace slf::linalg {

// Lowest n_low eigenpairs of a dense Hermitian matrix (contents destroyed).
// Eigenvalues ascending; eigenvectors in columns of V when V != nullptr.
// Throws ConvergenceError on LAPACK failure.
void heevr_lowest(Eigen::MatrixXcd& A, int n_low, Eigen::VectorXd& w, Eigen::MatrixXcd* V);

// In-place inverse of a Hermitian positive-definite matrix (Cholesky),
// result re-hermitized. Throws ConvergenceError if not positive definite.
void invert_hpd(Eigen::MatrixXcd& A);

}  // namespace slf::linalg
