#include "slf/coupling.hpp"

#include <cmath>

#include "slf/errors.hpp"
#include "slf/wigner.hpp"

namespace slf::coupling {

namespace cn = slf::constants;

double gamma1d_over_gamma0(const pwe::Field3D& field, const atoms::TransitionTable& table,
                           const Channel& ch, double x_nm, double y_nm, double z_nm) {
  const auto& line = table.line(ch.line);
  const auto& mode = field.mode;
  double vg = std::abs(mode.vg_over_c) * cn::c_m_s;
  if (std::abs(mode.vg_over_c) < 1e-9)
    throw ZeroVgError("gamma1d: group velocity vanishes (band edge)");

  double S = atoms::hyperfine_strength(line.J, line.Jp, table.nuclear_spin, ch.F, ch.Fp);
  double C = atoms::clebsch_gordan_factor(ch.F, ch.mF, ch.q, ch.Fp);
  if (C == 0.0 || S == 0.0) return 0.0;

  std::complex<double> ex, ey;
  mode.eval_at(x_nm, y_nm, ex, ey);
  double fz = field.slab.f(z_nm);
  ex *= fz;
  ey *= fz;
  // spherical projections |e_q^* . E|^2 (E_z = 0 in-model)
  double proj;
  if (ch.q == +1) proj = 0.5 * std::norm(ex - std::complex<double>(0, 1) * ey);
  else if (ch.q == -1) proj = 0.5 * std::norm(ex + std::complex<double>(0, 1) * ey);
  else proj = 0.0;
  // normalization integral is 1 nm^3; convert the field ratio to 1/m^3
  double ratio_m3 = proj * 1e27 / mode.norm_nm3;

  double lambda0 = line.lambda_nm * 1e-9;
  double a_m = mode.a_nm * 1e-9;
  double d2 = S * line.d_Cm * line.d_Cm * C * C;
  double gamma1d = cn::two_pi * cn::c_m_s * a_m * d2 * ratio_m3 /
                   (cn::eps0 * cn::hbar * lambda0 * vg);
  return gamma1d / line.gamma0_rad_s;
}

double beta_factor(double g, double gamma_prime_over_gamma0) {
  if (g < 0) throw DomainError("beta_factor: gamma1d must be >= 0");
  return g / (g + gamma_prime_over_gamma0);
}

PolarizationPoint polarization_at(std::complex<double> ex, std::complex<double> ey,
                                  double norm_floor) {
  PolarizationPoint p;
  double I = std::norm(ex) + std::norm(ey);
  if (I <= norm_floor) {
    p.masked = true;
    return p;
  }
  p.cz = 2.0 * std::imag(std::conj(ex) * ey) / I;
  p.f_plus = 0.5 * std::norm(ex - std::complex<double>(0, 1) * ey) / I;
  p.f_minus = 0.5 * std::norm(ex + std::complex<double>(0, 1) * ey) / I;
  return p;
}

EllipticityMap ellipticity(const pwe::BlochMode& mode) {
  EllipticityMap map;
  map.nx = mode.nx;
  map.ny = mode.ny;
  map.cz.assign(static_cast<size_t>(mode.nx) * mode.ny, 0.0);
  map.masked.assign(map.cz.size(), 0);
  double imax = 0.0;
  for (int iy = 0; iy < mode.ny; ++iy)
    for (int ix = 0; ix < mode.nx; ++ix)
      imax = std::max(imax, std::norm(mode.ex(iy, ix)) + std::norm(mode.ey(iy, ix)));
  double floor_ = 1e-12 * imax;
  for (int iy = 0; iy < mode.ny; ++iy) {
    for (int ix = 0; ix < mode.nx; ++ix) {
      auto p = polarization_at(mode.ex(iy, ix), mode.ey(iy, ix), floor_);
      size_t i = static_cast<size_t>(iy) * mode.nx + ix;
      map.cz[i] = p.cz;
      map.masked[i] = p.masked ? 1 : 0;
    }
  }
  return map;
}

CouplingMap build_coupling_map(const pwe::Field3D& field, const atoms::TransitionTable& table,
                               const Channel& ch, const trap::Grid3& grid,
                               double gamma_prime_over_gamma0) {
  CouplingMap map;
  map.grid = grid;
  map.channel = ch;
  size_t n = grid.size();
  map.gamma1d.assign(n, 0.0);
  map.beta.assign(n, 0.0);
  map.cz.assign(n, 0.0);
  map.f_plus.assign(n, 0.0);

  const auto& mode = field.mode;
  std::vector<std::complex<double>> ex, ey;
  mode.eval_grid(grid.x_nm, grid.y_nm, ex, ey);

  // per-(x,y) channel rate at f(z)=1, then scale by f(z)^2
  const auto& line = table.line(ch.line);
  double S = atoms::hyperfine_strength(line.J, line.Jp, table.nuclear_spin, ch.F, ch.Fp);
  double C = atoms::clebsch_gordan_factor(ch.F, ch.mF, ch.q, ch.Fp);
  double vg = std::abs(mode.vg_over_c) * cn::c_m_s;
  if (std::abs(mode.vg_over_c) < 1e-9) throw ZeroVgError("coupling map: vg = 0");
  double pre = cn::two_pi * cn::c_m_s * (mode.a_nm * 1e-9) * S * line.d_Cm * line.d_Cm * C * C /
               (cn::eps0 * cn::hbar * (line.lambda_nm * 1e-9) * vg * line.gamma0_rad_s);

  const size_t nxy = grid.nx() * grid.ny();
  for (size_t iz = 0; iz < grid.nz(); ++iz) {
    double f = field.slab.f(grid.z_nm[iz]);
    double f2 = f * f;
    for (size_t ixy = 0; ixy < nxy; ++ixy) {
      auto exv = ex[ixy], eyv = ey[ixy];
      double proj;
      if (ch.q == +1) proj = 0.5 * std::norm(exv - std::complex<double>(0, 1) * eyv);
      else if (ch.q == -1) proj = 0.5 * std::norm(exv + std::complex<double>(0, 1) * eyv);
      else proj = 0.0;
      size_t i = iz * nxy + ixy;
      map.gamma1d[i] = pre * proj * f2 * 1e27;
      map.beta[i] = beta_factor(map.gamma1d[i], gamma_prime_over_gamma0);
      auto p = polarization_at(exv, eyv);
      map.cz[i] = p.masked ? 0.0 : p.cz;
      map.f_plus[i] = p.masked ? 0.0 : p.f_plus;
    }
  }
  return map;
}

double beta_thermal(const trap::PotentialField& U, const CouplingMap& map, double T_K, double mF) {
  if (T_K <= 0) throw DomainError("beta_thermal: T must be > 0");
  // locate the basin minimum (interior, unclamped)
  double umin = 1e300;
  for (size_t i = 0; i < U.scalar_red.size(); ++i) {
    if (U.cp_clamped[i]) continue;
    umin = std::min(umin, U.U(i, mF));
  }
  if (umin >= 0.0) throw NoMinimumError("beta_thermal: potential has no bound minimum");
  const double kT_mK = T_K * 1e3;
  double wsum = 0.0, bsum = 0.0;
  for (size_t i = 0; i < U.scalar_red.size(); ++i) {
    if (U.cp_clamped[i]) continue;
    double u = U.U(i, mF);
    if (u > umin + 5.0 * kT_mK) continue;
    double w = std::exp(-(u - umin) / kT_mK);
    wsum += w;
    bsum += w * map.beta[i];
  }
  return bsum / wsum;
}

}  // namespace slf::coupling
