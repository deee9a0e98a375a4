#pragma once

#include <optional>
#include <vector>

#include "slf/constants.hpp"

namespace slf::lattice {

struct RowPerturbation {
  int index = 1;      // row number from the edge, 1-based
  double dy_nm = 0.0; // positive shifts the row away from the edge (toward bulk)
  double dr_nm = 0.0;
};

// Parametric half-W1 geometry: vacuum below y = 0, unpatterned strip of width
// L, then n_rows of triangular-lattice holes (row pitch a*sqrt(3)/2, alternate
// rows offset by a/2; row 1 holes sit at x = a/2). Rows 1..3 may carry
// (dy, dr) perturbations.
struct StructureParams {
  double a_nm = 212.0;
  double r_nm = 63.0;
  double L_nm = 337.0;
  double t_nm = 150.0;
  double n_slab = 3.34;
  std::vector<RowPerturbation> rows;
  int n_rows = 10;
  double w_vac_nm = 1200.0;
  double w_cap_nm = -1.0;          // < 0: default to one row pitch
  bool dy_away_from_edge = true;   // sign convention flag for dy

  double row_pitch() const { return a_nm * constants::sqrt3 / 2.0; }
  double cap() const { return w_cap_nm < 0 ? row_pitch() : w_cap_nm; }
  // y of row i center (1-based), perturbation included
  double row_y(int i) const;
  // x of row i hole centers modulo a (row 1 at a/2, row 2 at 0, ...)
  double row_x(int i) const { return (i % 2 == 1) ? a_nm / 2.0 : 0.0; }
  double row_radius(int i) const;
  double row_dy(int i) const;
  // total supercell height: w_vac + L + (n_rows-1)*pitch + cap
  double cell_height() const { return w_vac_nm + L_nm + (n_rows - 1) * row_pitch() + cap(); }

  void validate() const;  // throws OverlapError / ConfigError
};

struct GridSpec {
  int nx = 48;
  int ny = 0;           // 0: derived so dy ~ dx
  int supersample = 8;  // boundary-cell antialiasing subsamples per axis
};

struct Hole {
  double x_nm, y_nm, r_nm;
};

std::vector<Hole> hole_list(const StructureParams& p);

// Relative permittivity on a uniform grid over one supercell, sampled at cell
// centers; x in [0, a), y in [y0, y0 + wy) with y0 = -w_vac.
struct DielectricMap {
  int nx = 0, ny = 0;
  double a_nm = 0, wy_nm = 0, y0_nm = 0;
  std::vector<double> eps;  // [iy*nx + ix]

  double dx() const { return a_nm / nx; }
  double dy() const { return wy_nm / ny; }
  double x_of(int ix) const { return (ix + 0.5) * dx(); }
  double y_of(int iy) const { return y0_nm + (iy + 0.5) * dy(); }
  double at(int ix, int iy) const { return eps[static_cast<size_t>(iy) * nx + ix]; }
  double& at(int ix, int iy) { return eps[static_cast<size_t>(iy) * nx + ix]; }
  double mean_eps() const;
  // continuous lookup by nearest cell (used for the 1/eps field division)
  double sample(double x, double y) const;
};

// eps_slab: in-plane relative permittivity of the dielectric (n_eff^2 for the
// effective-index reduction; tests may pass n_slab^2 directly).
DielectricMap build_structure(const StructureParams& p, const GridSpec& grid, double eps_slab);

// Uniform map helper (tests, bulk references)
DielectricMap uniform_map(double eps, double a_nm, double wy_nm, int nx, int ny, double y0_nm = 0.0);

// Bulk (edgeless) 2-hole rectangular cell of the same triangular lattice:
// a x (a*sqrt 3), holes at (a/2, 0-ish) pattern; used for projected-gap scans.
DielectricMap build_bulk_cell(const StructureParams& p, int nx, double eps_slab, int supersample = 8);

}  // namespace slf::lattice
