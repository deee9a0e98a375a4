#pragma once

#include <string>
#include <vector>

#include "slf/constants.hpp"

namespace slf::atoms {

struct Line {
  std::string label;        // D1, D2, aux rows
  double lambda_nm = 0;
  double d_Cm = 0;          // reduced dipole <J||d||J'> (C m)
  double gamma0_rad_s = 0;  // natural linewidth (rad/s)
  double J = 0.5, Jp = 0.5;

  double omega() const { return constants::two_pi * constants::c_m_s / (lambda_nm * 1e-9); }
};

// Rb-87 line data plus hyperfine bookkeeping (I = 3/2).
struct TransitionTable {
  std::vector<Line> lines;
  double nuclear_spin = 1.5;
  int version = 1;

  const Line& line(const std::string& label) const;  // throws ConfigError if absent
  const Line& d2() const { return line("D2"); }
  const Line& d1() const { return line("D1"); }
  void validate() const;

  std::vector<double> ground_F() const;                  // F levels of the ground state
  std::vector<double> excited_F(const Line& l) const;    // F' levels of a line

  static TransitionTable load_csv(const std::string& path);
  std::string to_csv() const;
  static TransitionTable rb87_builtin();
};

struct Polarizability {
  double alpha_s = 0;    // scalar (SI, C m^2 / V)
  double alpha_v_J = 0;  // vector, J-level convention (S_1/2)
  double omega = 0;      // rad/s (real axis) or xi (imaginary axis)
  bool imaginary_axis = false;
};

// Dynamic polarizability of the S_1/2 ground state from the table lines:
//   alpha_s(w) = sum_k (2/3) d_k^2 w_k / (hbar (w_k^2 - w^2))
//   alpha_v_J(w) = (2/3)[ (d_D2^2/2) - d_D1^2 ]-weighted 2w/(hbar(w_k^2 - w^2))
// Imaginary axis: w^2 -> -xi^2. Throws ResonanceError within 10 linewidths of a
// real-axis resonance.
Polarizability polarizability(const TransitionTable& t, double omega_rad_s,
                              bool imaginary_axis = false);

double alpha_scalar_imag(const TransitionTable& t, double xi_rad_s);

// Vector polarizability projected on a ground hyperfine level F:
// alpha_v^(F) = 2 F g_K alpha_v_J, g_K = [F(F+1)+J(J+1)-I(I+1)] / (2F(F+1)).
double vector_polarizability_F(const TransitionTable& t, double F, double omega_rad_s);

}  // namespace slf::atoms
