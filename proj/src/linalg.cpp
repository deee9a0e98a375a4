#include "slf/linalg.hpp"

#include <complex>
#include <string>
#include <vector>
#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "slf/errors.hpp"

namespace slf::linalg {

void heevr_lowest(Eigen::MatrixXcd& A, int n_low, Eigen::VectorXd& w, Eigen::MatrixXcd* V) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  if (n_low > n) throw ConvergenceError("heevr: requested more eigenpairs than dimension");
  w.resize(n);
  lapack_int m = 0;
  std::vector<lapack_int> isuppz(static_cast<size_t>(2 * std::max<lapack_int>(1, n_low)));
  Eigen::MatrixXcd Z;
  char jobz = V ? 'V' : 'N';
  if (V) Z.resize(n, n_low);
  lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, jobz, 'I', 'L', n, A.data(), n, 0.0, 0.0, 1, n_low,
      0.0 /* abstol: default */, &m, w.data(), V ? Z.data() : nullptr,
      V ? n : 1, isuppz.data());
  if (info != 0)
    throw ConvergenceError("zheevr failed with info=" + std::to_string(info));
  if (m < n_low)
    throw ConvergenceError("zheevr returned fewer eigenpairs than requested");
  w.conservativeResize(n_low);
  if (V) *V = std::move(Z);
}

void invert_hpd(Eigen::MatrixXcd& A) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  lapack_int info = LAPACKE_zpotrf(LAPACK_COL_MAJOR, 'L', n, A.data(), n);
  if (info != 0)
    throw ConvergenceError("zpotrf failed with info=" + std::to_string(info) +
                           " (matrix not positive definite)");
  info = LAPACKE_zpotri(LAPACK_COL_MAJOR, 'L', n, A.data(), n);
  if (info != 0) throw ConvergenceError("zpotri failed with info=" + std::to_string(info));
  // zpotri fills the lower triangle; mirror and hermitize exactly
  for (lapack_int j = 0; j < n; ++j) {
    A(j, j) = std::complex<double>(A(j, j).real(), 0.0);
    for (lapack_int i = j + 1; i < n; ++i) A(j, i) = std::conj(A(i, j));
  }
}

}  // namespace slf::linalg
