#include "slf/slab.hpp"

#include <cmath>

#include "slf/constants.hpp"
#include "slf/errors.hpp"

namespace slf::pwe {

double SlabProfile::f(double z_nm) const {
  double az = std::abs(z_nm);
  if (az <= t_nm / 2) return std::cos(kappa_in * z_nm);
  return std::cos(kappa_in * t_nm / 2) * std::exp(-kappa_out * (az - t_nm / 2));
}

double SlabProfile::weight_nm() const {
  double u = kappa_in * t_nm / 2;
  double inside = t_nm / 2 + std::sin(kappa_in * t_nm) / (2 * kappa_in);
  double cu = std::cos(u);
  double outside = cu * cu / kappa_out;
  return inside + outside;
}

SlabProfile slab_effective_index(double n, double t_nm, double lambda0_nm) {
  if (n <= 1.0) throw ConfigError("slab index must be > 1");
  if (t_nm <= 0 || lambda0_nm <= 0) throw ConfigError("slab t and lambda must be > 0");
  const double k0 = constants::two_pi / lambda0_nm;
  const double V = 0.5 * t_nm * k0 * std::sqrt(n * n - 1.0);
  // TE0: u*tan(u) = w, u^2 + w^2 = V^2, u in (0, min(V, pi/2));
  // g(u) = u^2 (1 + tan^2 u) - V^2 is monotone increasing from -V^2.
  double lo = 0.0, hi = std::min(V, constants::pi / 2 * (1 - 1e-15));
  for (int it = 0; it < 200; ++it) {
    double u = 0.5 * (lo + hi);
    double tu = std::tan(u);
    double g = u * u * (1 + tu * tu) - V * V;
    (g < 0 ? lo : hi) = u;
  }
  double u = 0.5 * (lo + hi);
  double w = std::sqrt(std::max(0.0, V * V - u * u));
  SlabProfile p;
  p.t_nm = t_nm;
  p.lambda0_nm = lambda0_nm;
  p.kappa_in = 2 * u / t_nm;
  p.kappa_out = std::max(2 * w / t_nm, 1e-300);
  double beta2 = n * n * k0 * k0 - p.kappa_in * p.kappa_in;
  p.n_eff = std::sqrt(std::max(1.0, beta2)) / k0;
  return p;
}

}  // namespace slf::pwe
