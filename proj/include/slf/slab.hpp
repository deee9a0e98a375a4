#pragma once

namespace slf::pwe {

// Fundamental TE mode of a symmetric dielectric slab in vacuum: f(z) is the
// normalized transverse profile (cosine inside, exponential tails outside,
// continuous and C1 at z = +-t/2, max f = 1 at z = 0).
struct SlabProfile {
  double n_eff = 1.0;
  double kappa_in = 0.0;   // transverse wavenumber inside the slab (rad/nm)
  double kappa_out = 0.0;  // vacuum decay constant (1/nm)
  double t_nm = 0.0;
  double lambda0_nm = 0.0;

  double f(double z_nm) const;
  double weight_nm() const;  // integral of f(z)^2 over z, closed form
};

// Solves tan(kappa_in t/2) = gamma/kappa_in with kappa_in = sqrt(n^2 k0^2 - b^2),
// gamma = sqrt(b^2 - k0^2); the fundamental mode exists for every n > 1.
SlabProfile slab_effective_index(double n, double t_nm, double lambda0_nm);

}  // namespace slf::pwe
