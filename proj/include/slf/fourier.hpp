#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

#include "slf/geometry.hpp"

namespace slf::pwe {

// Plane-wave basis on the supercell reciprocal lattice, circular cutoff.
// Closed under negation and contains G = 0 by construction.
struct ReciprocalBasis {
  double b1 = 0, b2 = 0;  // 2*pi/a, 2*pi/Wy (rad/nm)
  double cutoff = 0;      // max |G| (rad/nm)
  std::vector<std::array<int, 2>> idx;     // (m, n)
  std::vector<std::array<double, 2>> g;    // (Gx, Gy)
  int max_m = 0, max_n = 0;

  size_t size() const { return idx.size(); }
  static ReciprocalBasis make(double a_nm, double wy_nm, double cutoff_rad_nm);
  // convenience: cutoff specified in units of 2*pi/a
  static ReciprocalBasis make_rel(double a_nm, double wy_nm, double cutoff_over_b1);
};

// Fourier data of a dielectric map: the eps(G-G') matrix over a basis, its
// (matrix) inverse used by the plane-wave operator, and the raw grid spectrum.
struct EpsFourier {
  Eigen::MatrixXcd eps_mat;   // Hermitian
  Eigen::MatrixXcd inv_eps;   // inverse of eps_mat, re-hermitized
  double dc = 0;              // eps(G=0)
  // full grid spectrum, row-major [n_mod_ny * nx + m_mod_nx], true-coordinate phase
  std::vector<std::complex<double>> spectrum;
  int nx = 0, ny = 0;
  double a_nm = 0, wy_nm = 0, y0_nm = 0;

  std::complex<double> coefficient(int m, int n) const;  // eps_hat(G_{m,n})
};

}  // namespace slf::pwe

namespace slf::lattice {

// eps(G-G') matrix (Hermitian) + inverse-permittivity matrix for a map.
// Throws CutoffError if the basis differences exceed the grid Nyquist limit.
pwe::EpsFourier fourier_coefficients(const DielectricMap& map, const pwe::ReciprocalBasis& basis);

// Grid spectrum only (no matrices); shared by field reconstruction.
std::vector<std::complex<double>> grid_spectrum(const DielectricMap& map);

}  // namespace slf::lattice
