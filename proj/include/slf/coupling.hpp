#pragma once

#include <complex>
#include <string>
#include <vector>

#include "slf/atoms.hpp"
#include "slf/pwe.hpp"
#include "slf/trap.hpp"

namespace slf::coupling {

// One excitation channel |F, mF> -> |F', mF + q> on a fine-structure line.
struct Channel {
  double F = 2;
  double mF = 2;
  int q = +1;
  double Fp = 3;
  std::string line = "D2";
};

// Guided-mode rate for the channel, in units of the line's free-space rate:
//   Gamma_1D = (2 pi c a / (eps0 hbar lambda0 v_g)) |<F||d||F'>|^2 |C|^2
//              |e_q^* . E(r)|^2 / Int eps |E|^2 dV
// with |<F||d||F'>|^2 = S_FF' |<J||d||J'>|^2. Throws ZeroVgError at band edges.
double gamma1d_over_gamma0(const pwe::Field3D& field, const atoms::TransitionTable& table,
                           const Channel& ch, double x_nm, double y_nm, double z_nm);

// beta = g / (g + Gamma' / Gamma0); the default follows Gamma' = Gamma0.
double beta_factor(double gamma1d_over_gamma0, double gamma_prime_over_gamma0 = 1.0);

// sigma+- projections and ellipticity of the in-plane field at a point
struct PolarizationPoint {
  double cz = 0;       // Im(E* x E)_z / |E|^2
  double f_plus = 0;   // |e_+^* . E|^2 / |E|^2
  double f_minus = 0;
  bool masked = false; // |E|^2 below 1e-12 of the map maximum
};

PolarizationPoint polarization_at(std::complex<double> ex, std::complex<double> ey,
                                  double norm_floor = 0.0);

struct EllipticityMap {
  std::vector<double> cz;       // over the mode grid (ny x nx, row-major)
  std::vector<char> masked;
  int nx = 0, ny = 0;
};

EllipticityMap ellipticity(const pwe::BlochMode& mode);

// Purcell/beta/polarization sampled on a trap grid (z folded via f(z)).
struct CouplingMap {
  trap::Grid3 grid;
  std::vector<double> gamma1d;  // units of Gamma0
  std::vector<double> beta;
  std::vector<double> cz;
  std::vector<double> f_plus;
  Channel channel;
};

CouplingMap build_coupling_map(const pwe::Field3D& field, const atoms::TransitionTable& table,
                               const Channel& ch, const trap::Grid3& grid,
                               double gamma_prime_over_gamma0 = 1.0);

// Boltzmann-weighted beta over the trap basin, truncated at U < Umin + 5 kT.
double beta_thermal(const trap::PotentialField& U, const CouplingMap& map, double T_K, double mF);

}  // namespace slf::coupling
