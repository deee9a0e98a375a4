#pragma once

namespace slf::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// CODATA 2018 exact/recommended values
inline constexpr double c_m_s = 2.99792458e8;        // speed of light (m/s)
inline constexpr double c_nm_thz = 299792.458;       // speed of light (nm * THz)
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double h_planck = 6.62607015e-34;   // J s
inline constexpr double eps0 = 8.8541878128e-12;     // F/m
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double amu = 1.66053906660e-27;     // kg
inline constexpr double eV_rad_s = 1.602176634e-19 / hbar;  // eV -> rad/s

inline constexpr double mass_rb87_kg = 86.909180531 * amu;

inline constexpr double sqrt3 = 1.7320508075688772;

// unit helpers
inline constexpr double thz_to_rad_s(double nu_thz) { return two_pi * nu_thz * 1e12; }
inline constexpr double rad_s_to_thz(double w) { return w / (two_pi * 1e12); }
inline constexpr double lambda_nm_to_thz(double lambda_nm) { return c_nm_thz / lambda_nm; }
inline constexpr double thz_to_lambda_nm(double nu_thz) { return c_nm_thz / nu_thz; }

}  // namespace slf::constants
