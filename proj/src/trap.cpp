#include "slf/trap.hpp"

#include <algorithm>
#include <cmath>

#include "slf/errors.hpp"

namespace slf::trap {

namespace cn = slf::constants;

Grid3 make_grid(double a_nm, int nx, double y_lo, double y_hi, int ny, double z_lo, double z_hi,
                int nz) {
  Grid3 g;
  for (int i = 0; i < nx; ++i) g.x_nm.push_back(a_nm * i / nx);  // periodic, endpoint excluded
  for (int i = 0; i < ny; ++i)
    g.y_nm.push_back(y_lo + (y_hi - y_lo) * i / (ny - 1));
  for (int i = 0; i < nz; ++i)
    g.z_nm.push_back(z_lo + (z_hi - z_lo) * i / (nz - 1));
  return g;
}

double Beam::omega_rad_s() const {
  return cn::two_pi * (cn::c_m_s / (lambda_phys_nm * 1e-9) + detuning_GHz * 1e9);
}

double physical_amplitude(double power_mW, double a_nm, double vg_over_c) {
  if (vg_over_c <= 1e-9) throw ZeroVgError("physical_field: group velocity is zero");
  double P = power_mW * 1e-3;
  double a_m = a_nm * 1e-9;
  double vg = vg_over_c * cn::c_m_s;
  // normalization integral is 1 in nm^3 = 1e-27 m^3
  return std::sqrt(2.0 * P * a_m / (vg * cn::eps0 * 1e-27));
}

namespace {

// distance (nm) from (y, z) to the slab set {y >= 0, |z| <= t/2}
double slab_distance(double y, double z, double t) {
  double az = std::abs(z);
  if (y >= 0 && az <= t / 2) return 0.0;
  if (y >= 0) return az - t / 2;
  if (az <= t / 2) return -y;
  return std::hypot(y, az - t / 2);
}

struct BeamFields {
  std::vector<std::complex<double>> ex, ey;  // on (x, y) grid, physically scaled
  std::vector<double> fz2;                   // f(z)^2 on the z grid
  double alpha_s = 0, alpha_vF = 0;
  double omega = 0;
};

}  // namespace

PotentialField assemble_potential(const TrapConfig& cfg, const atoms::TransitionTable& table,
                                  const Grid3& grid) {
  PotentialField out;
  out.grid = grid;
  out.F = cfg.F;
  size_t n = grid.size();
  out.scalar_red.assign(n, 0.0);
  out.scalar_blue.assign(n, 0.0);
  out.vector_unit.assign(n, 0.0);
  out.cp.assign(n, 0.0);
  out.cp_clamped.assign(n, 0);

  const size_t nxy = grid.nx() * grid.ny();

  // evaluate each beam's in-plane field and z profile
  std::vector<BeamFields> bf(cfg.beams.size());
  for (size_t b = 0; b < cfg.beams.size(); ++b) {
    const Beam& beam = cfg.beams[b];
    const auto& mode = beam.field.mode;
    std::vector<std::complex<double>> ex, ey;
    mode.eval_grid(grid.x_nm, grid.y_nm, ex, ey);
    double A = physical_amplitude(beam.power_mW, mode.a_nm, std::abs(mode.vg_over_c));
    for (size_t i = 0; i < ex.size(); ++i) {
      std::complex<double> vx = ex[i] * A, vy = ey[i] * A;
      if (beam.direction < 0) {
        vx = std::conj(vx);
        vy = std::conj(vy);
      }
      ex[i] = vx;
      ey[i] = vy;
    }
    bf[b].ex = std::move(ex);
    bf[b].ey = std::move(ey);
    bf[b].fz2.resize(grid.nz());
    for (size_t iz = 0; iz < grid.nz(); ++iz) {
      double f = beam.field.slab.f(grid.z_nm[iz]);
      bf[b].fz2[iz] = f * f;
    }
    bf[b].omega = beam.omega_rad_s();
    bf[b].alpha_s = atoms::polarizability(table, bf[b].omega).alpha_s;
    bf[b].alpha_vF = vector_polarizability_F(table, cfg.F, bf[b].omega);
  }

  // group beams within the coherence threshold; sum group fields coherently
  std::vector<int> group(cfg.beams.size(), -1);
  int ngroups = 0;
  for (size_t i = 0; i < cfg.beams.size(); ++i) {
    if (group[i] >= 0) continue;
    group[i] = ngroups++;
    for (size_t j = i + 1; j < cfg.beams.size(); ++j) {
      if (group[j] >= 0) continue;
      double dw = std::abs(bf[i].omega - bf[j].omega);
      if (dw <= cn::two_pi * cfg.coherence_threshold_GHz * 1e9) group[j] = group[i];
    }
  }

  const double J_to_mK = 1e3 / cn::k_boltzmann;

  for (int gidx = 0; gidx < ngroups; ++gidx) {
    // members of this coherent group
    std::vector<size_t> members;
    for (size_t b = 0; b < cfg.beams.size(); ++b)
      if (group[b] == gidx) members.push_back(b);
    // use the first member's polarizabilities (same frequency within 1 GHz)
    double a_s = bf[members[0]].alpha_s;
    double a_v = bf[members[0]].alpha_vF;
    bool red = a_s > 0;
    std::vector<double>& scal = red ? out.scalar_red : out.scalar_blue;

    // coherent field sum across members requires a shared z profile; members of
    // a pair share the mode family, so use the first member's f(z).
    for (size_t iz = 0; iz < grid.nz(); ++iz) {
      double fz2 = bf[members[0]].fz2[iz];
      for (size_t ixy = 0; ixy < nxy; ++ixy) {
        std::complex<double> ex = 0, ey = 0;
        for (size_t b : members) {
          ex += bf[b].ex[ixy];
          ey += bf[b].ey[ixy];
        }
        double I2 = (std::norm(ex) + std::norm(ey)) * fz2;
        double V2 = 2.0 * std::imag(std::conj(ex) * ey) * fz2;  // (i E x E*)_z
        size_t i = iz * nxy + ixy;
        scal[i] += -0.25 * a_s * I2 * J_to_mK;
        out.vector_unit[i] += -(a_v / 8.0) * V2 * J_to_mK;
      }
    }
  }

  if (cfg.include_cp) {
    if (cfg.c3_SI <= 0) throw ConfigError("trap: include_cp requires c3 > 0");
    for (size_t iz = 0; iz < grid.nz(); ++iz) {
      for (size_t iy = 0; iy < grid.ny(); ++iy) {
        double d = slab_distance(grid.y_nm[iy], grid.z_nm[iz], cfg.t_nm);
        bool clamped = d < cfg.clamp_d_nm;
        if (clamped) d = cfg.clamp_d_nm;
        double u = -cfg.c3_SI / std::pow(d * 1e-9, 3) * J_to_mK;
        for (size_t ix = 0; ix < grid.nx(); ++ix) {
          size_t i = grid.idx(ix, iy, iz);
          out.cp[i] = u;
          out.cp_clamped[i] = clamped ? 1 : 0;
        }
      }
    }
  }
  return out;
}

namespace {

// incoherent-sum scenario with every beam forced to one direction
TrapConfig single_direction(const TrapConfig& cfg) {
  TrapConfig c = cfg;
  for (auto& b : c.beams) b.direction = +1;
  return c;
}

double second_derivative_5pt(const std::vector<double>& u, double h_m) {
  // u has 5 samples centered at the evaluation point
  return (-u[0] + 16 * u[1] - 30 * u[2] + 16 * u[3] - u[4]) / (12 * h_m * h_m);
}

}  // namespace

TrapReport analyze_trap(const PotentialField& P, double mass_kg, double mF, double y_search_lo_nm,
                        double y_search_hi_nm) {
  const Grid3& g = P.grid;
  const int nx = static_cast<int>(g.nx()), ny = static_cast<int>(g.ny()),
            nz = static_cast<int>(g.nz());
  auto U = [&](int ix, int iy, int iz) {
    ix = ((ix % nx) + nx) % nx;  // x-periodic
    return P.U(g.idx(static_cast<size_t>(ix), static_cast<size_t>(iy), static_cast<size_t>(iz)),
               mF);
  };
  // search box in lattice coordinates: y in [-y_hi, -y_lo]
  double ylo = -y_search_hi_nm, yhi = -y_search_lo_nm;

  bool found = false;
  double umin = 1e300;
  int mx = 0, my = 0, mz = 0;
  for (int iz = 1; iz < nz - 1; ++iz) {
    for (int iy = 1; iy < ny - 1; ++iy) {
      if (g.y_nm[static_cast<size_t>(iy)] < ylo || g.y_nm[static_cast<size_t>(iy)] > yhi) continue;
      for (int ix = 0; ix < nx; ++ix) {
        if (P.cp_clamped[g.idx(static_cast<size_t>(ix), static_cast<size_t>(iy),
                               static_cast<size_t>(iz))])
          continue;
        double u = U(ix, iy, iz);
        if (u >= umin) continue;
        bool is_min = u <= U(ix - 1, iy, iz) && u <= U(ix + 1, iy, iz) && u <= U(ix, iy - 1, iz) &&
                      u <= U(ix, iy + 1, iz) && u <= U(ix, iy, iz - 1) && u <= U(ix, iy, iz + 1);
        if (is_min) {
          found = true;
          umin = u;
          mx = ix;
          my = iy;
          mz = iz;
        }
      }
    }
  }
  if (!found || umin >= 0.0)
    throw NoMinimumError("analyze_trap: no bound interior minimum in the search box");

  TrapReport rep;
  rep.u_min_mK = umin;
  rep.imin = g.idx(static_cast<size_t>(mx), static_cast<size_t>(my), static_cast<size_t>(mz));

  // sub-grid refinement per axis (parabolic)
  auto refine = [&](double h, double um, double u0, double up) {
    double den = um - 2 * u0 + up;
    if (den <= 0) return 0.0;
    return 0.5 * h * (um - up) / den;
  };
  double dxg = g.x_nm.size() > 1 ? g.x_nm[1] - g.x_nm[0] : 1.0;
  double dyg = g.y_nm[1] - g.y_nm[0];
  double dzg = g.z_nm[1] - g.z_nm[0];
  double xr = g.x_nm[static_cast<size_t>(mx)] + refine(dxg, U(mx - 1, my, mz), umin, U(mx + 1, my, mz));
  double yr = g.y_nm[static_cast<size_t>(my)] + refine(dyg, U(mx, my - 1, mz), umin, U(mx, my + 1, mz));
  double zr = g.z_nm[static_cast<size_t>(mz)] + refine(dzg, U(mx, my, mz - 1), umin, U(mx, my, mz + 1));
  rep.r_min_nm = {xr, -yr, zr};  // y reported off-edge positive

  // trap frequencies from 5-point stencils (mK -> J)
  const double mK_to_J = 1e-3 * cn::k_boltzmann;
  auto freq = [&](int axis, double h_nm) {
    std::vector<double> u(5);
    for (int s = -2; s <= 2; ++s) {
      int ix = mx + (axis == 0 ? s : 0);
      int iy = my + (axis == 1 ? s : 0);
      int iz = mz + (axis == 2 ? s : 0);
      iy = std::clamp(iy, 0, ny - 1);
      iz = std::clamp(iz, 0, nz - 1);
      u[static_cast<size_t>(s + 2)] = U(ix, iy, iz) * mK_to_J;
    }
    double upp = second_derivative_5pt(u, h_nm * 1e-9);
    return upp > 0 ? std::sqrt(upp / mass_kg) / (cn::two_pi * 1e6) : 0.0;
  };
  rep.freqs_MHz = {freq(0, dxg), freq(1, dyg), freq(2, dzg)};

  // double well along z at (mx, my)
  {
    std::vector<std::pair<int, double>> zmins;
    for (int iz = 1; iz < nz - 1; ++iz) {
      double u = U(mx, my, iz);
      if (u < U(mx, my, iz - 1) && u < U(mx, my, iz + 1)) zmins.emplace_back(iz, u);
    }
    for (size_t i = 0; i < zmins.size() && !rep.double_well_z; ++i) {
      for (size_t j = i + 1; j < zmins.size(); ++j) {
        double za = g.z_nm[static_cast<size_t>(zmins[i].first)];
        double zb = g.z_nm[static_cast<size_t>(zmins[j].first)];
        if (za * zb >= 0) continue;  // must straddle z = 0
        double barrier = -1e300;
        for (int iz = std::min(zmins[i].first, zmins[j].first);
             iz <= std::max(zmins[i].first, zmins[j].first); ++iz)
          barrier = std::max(barrier, U(mx, my, iz));
        if (barrier - std::max(zmins[i].second, zmins[j].second) > 1e-3) {
          rep.double_well_z = true;
          break;
        }
      }
    }
  }

  // escape barriers: outward (+y off-edge = decreasing lattice y), +-z, +-x
  auto path_barrier = [&](auto next) {
    double peak = umin;
    int ix = mx, iy = my, iz = mz;
    while (next(ix, iy, iz)) peak = std::max(peak, U(ix, iy, iz));
    peak = std::max(peak, 0.0);  // escape level far away
    return peak - umin;
  };
  double b_out = path_barrier([&](int& ix, int& iy, int& iz) {
    (void)ix; (void)iz;
    return --iy >= 0;
  });
  double b_zp = path_barrier([&](int& ix, int& iy, int& iz) {
    (void)ix; (void)iy;
    return ++iz <= nz - 1;
  });
  double b_zm = path_barrier([&](int& ix, int& iy, int& iz) {
    (void)ix; (void)iy;
    return --iz >= 0;
  });
  double b_x = umin;
  for (int ix = 0; ix < nx; ++ix) b_x = std::max(b_x, U(ix, my, mz));
  b_x -= umin;
  rep.depth_mK = std::min({b_out, b_zp, b_zm, b_x});

  // mF spread at the minimum
  double lo = 1e300, hi = -1e300;
  for (double m = -P.F; m <= P.F + 1e-9; m += 1.0) {
    double u = P.U(rep.imin, m);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  rep.mF_spread_mK = hi - lo;
  return rep;
}

std::vector<ScanRow> wavelength_scan(const TrapConfig& base, size_t scan_beam,
                                     const pwe::BandWorkspace& ws, const pwe::BandSet& bands,
                                     int band, double lambda_lo_nm, double lambda_hi_nm,
                                     int n_lambda, double power_cap_mW,
                                     const atoms::TransitionTable& table, const Grid3& grid,
                                     int n_power) {
  std::vector<ScanRow> rows;
  for (int il = 0; il < n_lambda; ++il) {
    double lam = lambda_lo_nm + (lambda_hi_nm - lambda_lo_nm) * il / std::max(1, n_lambda - 1);
    ScanRow row;
    row.lambda_nm = lam;
    double nu = cn::c_nm_thz / lam;
    // locate k on the band whose model frequency matches nu
    int hit = -1;
    for (int ik = 0; ik + 1 < bands.n_k(); ++ik) {
      double f0 = bands.freq_thz(ik, band), f1 = bands.freq_thz(ik + 1, band);
      if ((f0 - nu) * (f1 - nu) <= 0) {
        hit = ik;
        break;
      }
    }
    if (hit < 0 || power_cap_mW <= 0) {
      rows.push_back(row);
      continue;
    }
    double f0 = bands.freq_thz(hit, band), f1 = bands.freq_thz(hit + 1, band);
    double t = (f1 == f0) ? 0.0 : (nu - f0) / (f1 - f0);
    double kx = bands.k_list[static_cast<size_t>(hit)] +
                t * (bands.k_list[static_cast<size_t>(hit + 1)] - bands.k_list[static_cast<size_t>(hit)]);
    pwe::BlochMode mode;
    try {
      mode = ws.bloch_field(kx, band, &bands);
    } catch (const Error&) {
      rows.push_back(row);
      continue;
    }
    auto slab = pwe::slab_effective_index(3.34, base.t_nm, lam);
    pwe::Field3D f3 = pwe::extend_to_3d(mode, slab);

    for (int ip = 0; ip < n_power; ++ip) {
      double frac = static_cast<double>(ip + 1) / n_power;
      double pw = power_cap_mW * frac;
      TrapConfig cfg = base;
      // the scanned beam and its counter-propagating partner move together
      size_t partner = SIZE_MAX;
      for (size_t b = 0; b < cfg.beams.size(); ++b) {
        if (b == scan_beam) continue;
        if (std::abs(cfg.beams[b].lambda_phys_nm - cfg.beams[scan_beam].lambda_phys_nm) < 5.0)
          partner = b;
      }
      cfg.beams[scan_beam].field = f3;
      cfg.beams[scan_beam].lambda_phys_nm = lam;
      cfg.beams[scan_beam].power_mW = pw;
      if (partner != SIZE_MAX) {
        cfg.beams[partner].field = f3;
        cfg.beams[partner].lambda_phys_nm = lam;
        cfg.beams[partner].power_mW = pw;
      }
      try {
        auto pot = assemble_potential(cfg, table, grid);
        auto rep = analyze_trap(pot, cfg.mass_kg, cfg.F);
        if (rep.depth_mK > 0) {
          row.feasible = true;
          row.power_mW = pw;
          row.depth_mK = rep.depth_mK;
          row.double_well_z = rep.double_well_z;
          break;
        }
      } catch (const Error&) {
        // not feasible at this power
      }
    }
    rows.push_back(row);
  }
  return rows;
}

ZeemanResult zeeman_compensation(const TrapConfig& cfg, const atoms::TransitionTable& table,
                                 const Grid3& grid) {
  ZeemanResult res;
  auto paired_pot = assemble_potential(cfg, table, grid);
  auto single_pot = assemble_potential(single_direction(cfg), table, grid);
  auto rep_paired = analyze_trap(paired_pot, cfg.mass_kg, cfg.F);
  auto rep_single = analyze_trap(single_pot, cfg.mass_kg, cfg.F);
  res.spread_paired_mK = rep_paired.mF_spread_mK;
  res.spread_single_mK = rep_single.mF_spread_mK;
  if (res.spread_single_mK < 1e-12) {
    res.reduction = 1.0;
  } else {
    res.reduction = 1.0 - res.spread_paired_mK / res.spread_single_mK;
  }
  return res;
}

}  // namespace slf::trap
