#include "slf/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <string>

#include "slf/constants.hpp"
#include "slf/errors.hpp"
#include "slf/linalg.hpp"

namespace slf::pwe {

ReciprocalBasis ReciprocalBasis::make(double a_nm, double wy_nm, double cutoff_rad_nm) {
  ReciprocalBasis b;
  b.b1 = constants::two_pi / a_nm;
  b.b2 = constants::two_pi / wy_nm;
  b.cutoff = cutoff_rad_nm;
  int mmax = static_cast<int>(std::floor(cutoff_rad_nm / b.b1));
  int nmax = static_cast<int>(std::floor(cutoff_rad_nm / b.b2));
  for (int m = -mmax; m <= mmax; ++m) {
    for (int n = -nmax; n <= nmax; ++n) {
      double gx = m * b.b1, gy = n * b.b2;
      if (gx * gx + gy * gy <= cutoff_rad_nm * cutoff_rad_nm) {
        b.idx.push_back({m, n});
        b.g.push_back({gx, gy});
        b.max_m = std::max(b.max_m, std::abs(m));
        b.max_n = std::max(b.max_n, std::abs(n));
      }
    }
  }
  return b;
}

ReciprocalBasis ReciprocalBasis::make_rel(double a_nm, double wy_nm, double cutoff_over_b1) {
  return make(a_nm, wy_nm, cutoff_over_b1 * constants::two_pi / a_nm);
}

std::complex<double> EpsFourier::coefficient(int m, int n) const {
  int mm = ((m % nx) + nx) % nx;
  int nn = ((n % ny) + ny) % ny;
  return spectrum[static_cast<size_t>(nn) * nx + mm];
}

}  // namespace slf::pwe

namespace slf::lattice {

using pwe::EpsFourier;
using pwe::ReciprocalBasis;

std::vector<std::complex<double>> grid_spectrum(const DielectricMap& map) {
  const int nx = map.nx, ny = map.ny;
  std::vector<std::complex<double>> in(static_cast<size_t>(nx) * ny);
  std::vector<std::complex<double>> out(static_cast<size_t>(nx) * ny);
  for (size_t i = 0; i < in.size(); ++i) in[i] = map.eps[i];
  fftw_plan plan = fftw_plan_dft_2d(ny, nx, reinterpret_cast<fftw_complex*>(in.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  // normalize and shift to true coordinates (cell-center sampling, y0 offset)
  const double inv = 1.0 / (static_cast<double>(nx) * ny);
  const double dx = map.dx(), dy = map.dy();
  const double b1 = constants::two_pi / map.a_nm, b2 = constants::two_pi / map.wy_nm;
  for (int n = 0; n < ny; ++n) {
    int nsig = n <= ny / 2 ? n : n - ny;  // signed harmonic
    double phy = -b2 * nsig * (map.y0_nm + 0.5 * dy);
    for (int m = 0; m < nx; ++m) {
      int msig = m <= nx / 2 ? m : m - nx;
      double ph = -b1 * msig * 0.5 * dx + phy;
      out[static_cast<size_t>(n) * nx + m] *= inv * std::complex<double>(std::cos(ph), std::sin(ph));
    }
  }
  return out;
}

EpsFourier fourier_coefficients(const DielectricMap& map, const ReciprocalBasis& basis) {
  const int nx = map.nx, ny = map.ny;
  if (4 * basis.max_m + 2 > nx || 4 * basis.max_n + 2 > ny)
    throw CutoffError("plane-wave cutoff exceeds the grid Nyquist limit (need nx >= " +
                      std::to_string(4 * basis.max_m + 2) + ", ny >= " +
                      std::to_string(4 * basis.max_n + 2) + ")");

  EpsFourier f;
  f.nx = nx;
  f.ny = ny;
  f.a_nm = map.a_nm;
  f.wy_nm = map.wy_nm;
  f.y0_nm = map.y0_nm;
  f.spectrum = grid_spectrum(map);
  f.dc = f.coefficient(0, 0).real();

  const size_t N = basis.size();
  f.eps_mat.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (size_t j = 0; j < N; ++j) {
    for (size_t i = 0; i < N; ++i) {
      int dm = basis.idx[i][0] - basis.idx[j][0];
      int dn = basis.idx[i][1] - basis.idx[j][1];
      f.eps_mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f.coefficient(dm, dn);
    }
  }
  // exact hermitization (real map => Hermitian up to FFT rounding)
  f.eps_mat = ((f.eps_mat + f.eps_mat.adjoint()) / 2.0).eval();
  f.inv_eps = f.eps_mat;
  linalg::invert_hpd(f.inv_eps);
  f.inv_eps = ((f.inv_eps + f.inv_eps.adjoint()) / 2.0).eval();
  return f;
}

}  // namespace slf::lattice
