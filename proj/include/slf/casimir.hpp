#pragma once

#include <array>
#include <string>
#include <vector>

#include "slf/atoms.hpp"

namespace slf::casimir {

// Tabulated permittivity: rows of (photon energy eV, eps', eps''), strictly
// increasing in energy, spanning at least [0.5, 6] eV.
struct PermittivityTable {
  std::vector<std::array<double, 3>> rows;
  std::string provenance;

  void validate() const;
  static PermittivityTable load_csv(const std::string& path);
  std::string to_csv() const;
  // Fallback: undamped two-oscillator model solved exactly from the anchors
  // n = 3.340 @ 780.241 nm and n = 3.550 @ 1.85 eV (oscillators at 2.05/4.80 eV).
  static PermittivityTable analytic_fallback();
};

// eps(i xi) = 1 + (2/pi) Int_0^inf  xi (eps'(w) - 1) / (w^2 + xi^2) dw,
// constant-eps' extension below the table, 1/w^2 tail above (fit to the last
// decade). Throws TableRangeError when extrapolation exceeds 1% control.
double eps_imaginary_axis(const PermittivityTable& t, double xi_rad_s);

struct CasimirCoefficient {
  double c3_SI = 0;            // J m^3
  double c3_Hz_um3 = 0;        // c3_SI / h * 1e18
  double quadrature_rel_err = 0;
};

// C3 = (hbar / 4 pi) Int_0^inf  alpha_vol(i xi) (eps(i xi)-1)/(eps(i xi)+1) d xi,
// alpha_vol = alpha_SI / (4 pi eps0). Log-grid doubling on [1e12, 1e18] rad/s
// plus an explicit [0, 1e12] segment. Throws ConvergenceError if doubling moves
// the result by more than 1%.
CasimirCoefficient compute_c3(const PermittivityTable& t, const atoms::TransitionTable& at);

}  // namespace slf::casimir
