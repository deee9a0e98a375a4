#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "slf/atoms.hpp"
#include "slf/pwe.hpp"

namespace slf::trap {

// Regular product grid; y in the lattice frame (vacuum side negative).
struct Grid3 {
  std::vector<double> x_nm, y_nm, z_nm;
  size_t nx() const { return x_nm.size(); }
  size_t ny() const { return y_nm.size(); }
  size_t nz() const { return z_nm.size(); }
  size_t size() const { return nx() * ny() * nz(); }
  size_t idx(size_t ix, size_t iy, size_t iz) const { return (iz * ny() + iy) * nx() + ix; }
};

Grid3 make_grid(double a_nm, int nx, double y_lo, double y_hi, int ny, double z_lo, double z_hi,
                int nz);

struct Beam {
  pwe::Field3D field;        // normalized mode + slab profile
  double power_mW = 0;
  int direction = +1;        // -1 conjugates the in-plane Bloch field
  double lambda_phys_nm = 0; // wavelength for the atomic response
  double detuning_GHz = 0;   // pair offset added to the beam frequency

  double omega_rad_s() const;
};

struct TrapConfig {
  std::vector<Beam> beams;
  double F = 2;
  double mass_kg = constants::mass_rb87_kg;
  bool include_cp = true;
  double c3_SI = 0;          // J m^3
  double t_nm = 150.0;       // slab thickness for the CP distance function
  double clamp_d_nm = 10.0;
  double coherence_threshold_GHz = 1.0;
};

// mF-resolved potential, separable components in mK:
//   U_mF = scalar_red + scalar_blue + (mF/F) * vector_unit + cp
struct PotentialField {
  Grid3 grid;
  std::vector<double> scalar_red, scalar_blue, vector_unit, cp;
  std::vector<char> cp_clamped;
  double F = 2;

  double U(size_t i, double mF) const {
    return scalar_red[i] + scalar_blue[i] + (mF / F) * vector_unit[i] + cp[i];
  }
};

// Electric-field amplitude scale (V/m per unit normalized mode profile):
// A^2 = 2 P a / (v_g eps0 N), N = 1 (nm^3 normalization folded in).
double physical_amplitude(double power_mW, double a_nm, double vg_over_c);

PotentialField assemble_potential(const TrapConfig& cfg, const atoms::TransitionTable& table,
                                  const Grid3& grid);

struct TrapReport {
  std::array<double, 3> r_min_nm{};   // x, y (off-edge, positive), z
  double u_min_mK = 0;
  double depth_mK = 0;
  std::array<double, 3> freqs_MHz{};  // omega_i / 2 pi
  bool double_well_z = false;
  double mF_spread_mK = 0;
  size_t imin = 0;
};

// Search box in off-edge coordinates [y_lo, y_hi] nm (positive off the edge).
TrapReport analyze_trap(const PotentialField& U, double mass_kg, double mF,
                        double y_search_lo_nm = 30.0, double y_search_hi_nm = 300.0);

struct ScanRow {
  double lambda_nm = 0;
  bool feasible = false;
  double power_mW = 0;  // smallest feasible power of the scanned beam
  double depth_mK = 0;
  bool double_well_z = false;
};

// Vary the wavelength of one beam along its band (in-model wavelengths) and
// report feasibility under a power cap; other beams stay fixed.
std::vector<ScanRow> wavelength_scan(const TrapConfig& base, size_t scan_beam,
                                     const pwe::BandWorkspace& ws, const pwe::BandSet& bands,
                                     int band, double lambda_lo_nm, double lambda_hi_nm,
                                     int n_lambda, double power_cap_mW,
                                     const atoms::TransitionTable& table, const Grid3& grid,
                                     int n_power = 6);

struct ZeemanResult {
  double spread_single_mK = 0;
  double spread_paired_mK = 0;
  double reduction = 0;  // 1 - paired/single (1.0 when single is zero)
};

ZeemanResult zeeman_compensation(const TrapConfig& cfg, const atoms::TransitionTable& table,
                                 const Grid3& grid);

}  // namespace slf::trap
