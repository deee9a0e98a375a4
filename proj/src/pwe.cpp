#include "slf/pwe.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "slf/constants.hpp"
#include "slf/errors.hpp"
#include "slf/linalg.hpp"

namespace slf::pwe {

namespace cn = slf::constants;

double BandSet::k_over_pi_a(int ik) const { return k_list[static_cast<size_t>(ik)] * a_nm / cn::pi; }

int BandSet::nearest_k_index(double kx) const {
  int best = 0;
  double dbest = std::abs(k_list[0] - kx);
  for (int i = 1; i < n_k(); ++i) {
    double d = std::abs(k_list[static_cast<size_t>(i)] - kx);
    if (d < dbest) {
      dbest = d;
      best = i;
    }
  }
  return best;
}

namespace {
double interp(const std::vector<double>& xs, const Eigen::MatrixXd& ys, int col, double x) {
  const int n = static_cast<int>(xs.size());
  if (x <= xs.front()) return ys(0, col);
  if (x >= xs.back()) return ys(n - 1, col);
  int i = static_cast<int>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
  i = std::clamp(i, 0, n - 2);
  double t = (x - xs[static_cast<size_t>(i)]) /
             (xs[static_cast<size_t>(i + 1)] - xs[static_cast<size_t>(i)]);
  return (1 - t) * ys(i, col) + t * ys(i + 1, col);
}
}  // namespace

double BandSet::freq_at(double kx, int band) const { return interp(k_list, freq_thz, band, kx); }
double BandSet::vg_at(double kx, int band) const { return interp(k_list, vg_over_c, band, kx); }

// ---------------------------------------------------------------------------

BandWorkspace::BandWorkspace(lattice::DielectricMap map, ReciprocalBasis basis,
                             std::optional<SlabProfile> slab, int threads)
    : map_(std::move(map)),
      basis_(std::move(basis)),
      four_(lattice::fourier_coefficients(map_, basis_)),
      slab_(slab),
      threads_(threads > 0 ? threads
                           : std::max(1u, std::thread::hardware_concurrency())) {}

double BandWorkspace::z_weight() const { return slab_ ? slab_->weight_nm() : 1.0; }

Eigen::MatrixXcd BandWorkspace::assemble(double kx, double ky) const {
  const auto N = static_cast<Eigen::Index>(basis_.size());
  Eigen::MatrixXcd M(N, N);
  std::vector<double> tx(basis_.size()), ty(basis_.size());
  for (size_t i = 0; i < basis_.size(); ++i) {
    tx[i] = kx + basis_.g[i][0];
    ty[i] = ky + basis_.g[i][1];
  }
  for (Eigen::Index j = 0; j < N; ++j) {
    const double txj = tx[static_cast<size_t>(j)], tyj = ty[static_cast<size_t>(j)];
    for (Eigen::Index i = 0; i < N; ++i) {
      double dot = tx[static_cast<size_t>(i)] * txj + ty[static_cast<size_t>(i)] * tyj;
      M(i, j) = four_.inv_eps(i, j) * dot;
    }
  }
  return M;
}

Eigen::VectorXd BandWorkspace::solve_at(double kx, double ky, int n_bands,
                                        Eigen::MatrixXcd* vecs) const {
  if (n_bands > static_cast<int>(basis_.size()))
    throw ConvergenceError("n_bands exceeds plane-wave basis size");
  Eigen::MatrixXcd M = assemble(kx, ky);
  Eigen::VectorXd lam;
  linalg::heevr_lowest(M, n_bands, lam, vecs);
  Eigen::VectorXd nu(n_bands);
  for (int b = 0; b < n_bands; ++b)
    nu[b] = cn::c_nm_thz * std::sqrt(std::max(0.0, lam[b])) / cn::two_pi;
  return nu;
}

BandSet BandWorkspace::solve_bands(const std::vector<double>& k_list, int n_bands) const {
  const int nk = static_cast<int>(k_list.size());
  BandSet bs;
  bs.k_list = k_list;
  bs.a_nm = map_.a_nm;
  bs.freq_thz.resize(nk, n_bands);
  bs.vg_over_c.resize(nk, n_bands);
  bs.perm.assign(static_cast<size_t>(nk), {});

  std::vector<Eigen::VectorXd> freqs(static_cast<size_t>(nk));
  std::vector<Eigen::MatrixXcd> vecs(static_cast<size_t>(nk));
  std::atomic<int> next{0};
  std::vector<std::string> errors;
  std::mutex err_mtx;
  auto worker = [&]() {
    for (;;) {
      int ik = next.fetch_add(1);
      if (ik >= nk) return;
      try {
        freqs[static_cast<size_t>(ik)] =
            solve_at(k_list[static_cast<size_t>(ik)], 0.0, n_bands, &vecs[static_cast<size_t>(ik)]);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(err_mtx);
        errors.emplace_back(e.what());
      }
    }
  };
  int nthr = std::min(threads_, nk);
  std::vector<std::thread> pool;
  for (int t = 1; t < nthr; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (!errors.empty()) throw ConvergenceError("solve_bands: " + errors.front());

  // track by modal overlap in plane-wave coefficient space
  Eigen::MatrixXcd prev = vecs[0];
  bs.perm[0].resize(static_cast<size_t>(n_bands));
  for (int b = 0; b < n_bands; ++b) {
    bs.perm[0][static_cast<size_t>(b)] = b;
    bs.freq_thz(0, b) = freqs[0][b];
  }
  for (int ik = 1; ik < nk; ++ik) {
    Eigen::MatrixXd ov = (prev.adjoint() * vecs[static_cast<size_t>(ik)]).cwiseAbs();
    std::vector<int> assign(static_cast<size_t>(n_bands), -1);
    std::vector<bool> used(static_cast<size_t>(n_bands), false);
    for (int pass = 0; pass < n_bands; ++pass) {
      int bi = -1, bj = -1;
      double best = -1.0;
      for (int i = 0; i < n_bands; ++i) {
        if (assign[static_cast<size_t>(i)] >= 0) continue;
        for (int j = 0; j < n_bands; ++j) {
          if (used[static_cast<size_t>(j)]) continue;
          if (ov(i, j) > best) {
            best = ov(i, j);
            bi = i;
            bj = j;
          }
        }
      }
      assign[static_cast<size_t>(bi)] = bj;
      used[static_cast<size_t>(bj)] = true;
      if (best < 0.5 && bs.warnings.size() < 16)
        bs.warnings.push_back("DegeneracyWarning: ambiguous band tracking at k index " +
                              std::to_string(ik) + " band " + std::to_string(bi) +
                              " (|overlap| = " + std::to_string(best) + ")");
    }
    bs.perm[static_cast<size_t>(ik)].resize(static_cast<size_t>(n_bands));
    Eigen::MatrixXcd tracked(vecs[static_cast<size_t>(ik)].rows(), n_bands);
    for (int b = 0; b < n_bands; ++b) {
      int raw = assign[static_cast<size_t>(b)];
      bs.perm[static_cast<size_t>(ik)][static_cast<size_t>(b)] = raw;
      bs.freq_thz(ik, b) = freqs[static_cast<size_t>(ik)][raw];
      tracked.col(b) = vecs[static_cast<size_t>(ik)].col(raw);
    }
    prev = std::move(tracked);
  }

  // group velocities: 3-point central, one-sided at the zone ends
  for (int b = 0; b < n_bands; ++b) {
    for (int ik = 0; ik < nk; ++ik) {
      int i0 = std::max(0, ik - 1), i1 = std::min(nk - 1, ik + 1);
      double dnu = bs.freq_thz(i1, b) - bs.freq_thz(i0, b);
      double dk = k_list[static_cast<size_t>(i1)] - k_list[static_cast<size_t>(i0)];
      bs.vg_over_c(ik, b) = cn::two_pi * (dnu / dk) / cn::c_nm_thz;
    }
  }
  return bs;
}

// ---------------------------------------------------------------------------
// spectrum <-> grid helpers (true-coordinate phase convention; see fourier.cpp)

namespace {

void backward_fft(std::vector<std::complex<double>>& spec, int nx, int ny, double a, double wy,
                  double y0, std::vector<std::complex<double>>& out) {
  const double b1 = cn::two_pi / a, b2 = cn::two_pi / wy;
  const double dx = a / nx, dy = wy / ny;
  std::vector<std::complex<double>> tmp(spec.size());
  for (int n = 0; n < ny; ++n) {
    int nsig = n <= ny / 2 ? n : n - ny;
    double phy = b2 * nsig * (y0 + 0.5 * dy);
    for (int m = 0; m < nx; ++m) {
      int msig = m <= nx / 2 ? m : m - nx;
      double ph = b1 * msig * 0.5 * dx + phy;
      tmp[static_cast<size_t>(n) * nx + m] =
          spec[static_cast<size_t>(n) * nx + m] * std::complex<double>(std::cos(ph), std::sin(ph));
    }
  }
  out.assign(spec.size(), {});
  fftw_plan plan = fftw_plan_dft_2d(ny, nx, reinterpret_cast<fftw_complex*>(tmp.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

std::vector<std::complex<double>> forward_fft(const Eigen::MatrixXcd& grid, int nx, int ny,
                                              double a, double wy, double y0) {
  std::vector<std::complex<double>> in(static_cast<size_t>(nx) * ny);
  for (int n = 0; n < ny; ++n)
    for (int m = 0; m < nx; ++m) in[static_cast<size_t>(n) * nx + m] = grid(n, m);
  std::vector<std::complex<double>> out(in.size());
  fftw_plan plan = fftw_plan_dft_2d(ny, nx, reinterpret_cast<fftw_complex*>(in.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()),
                                    FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  const double inv = 1.0 / (static_cast<double>(nx) * ny);
  const double b1 = cn::two_pi / a, b2 = cn::two_pi / wy;
  const double dx = a / nx, dy = wy / ny;
  for (int n = 0; n < ny; ++n) {
    int nsig = n <= ny / 2 ? n : n - ny;
    double phy = -b2 * nsig * (y0 + 0.5 * dy);
    for (int m = 0; m < nx; ++m) {
      int msig = m <= nx / 2 ? m : m - nx;
      double ph = -b1 * msig * 0.5 * dx + phy;
      out[static_cast<size_t>(n) * nx + m] *= inv * std::complex<double>(std::cos(ph), std::sin(ph));
    }
  }
  return out;
}

}  // namespace

BlochMode BandWorkspace::bloch_field(double kx, int band, const BandSet* ctx) const {
  const int nx = map_.nx, ny = map_.ny;
  int n_solve = band + 1;
  if (ctx) n_solve = std::max(n_solve, ctx->n_bands());
  Eigen::MatrixXcd vecs;
  Eigen::VectorXd nu = solve_at(kx, 0.0, n_solve, &vecs);

  int raw = band;
  double vg;
  if (ctx) {
    int ik = ctx->nearest_k_index(kx);
    if (std::abs(ctx->k_list[static_cast<size_t>(ik)] - kx) < 1e-12) {
      raw = ctx->perm[static_cast<size_t>(ik)][static_cast<size_t>(band)];
    } else {
      // track from the nearest context sample by overlap
      Eigen::MatrixXcd ref;
      solve_at(ctx->k_list[static_cast<size_t>(ik)], 0.0, n_solve, &ref);
      int raw_ref = ctx->perm[static_cast<size_t>(ik)][static_cast<size_t>(band)];
      Eigen::VectorXd ov = (ref.col(raw_ref).adjoint() * vecs).cwiseAbs().transpose();
      ov.maxCoeff(&raw);
    }
    vg = ctx->vg_at(kx, band);
  } else {
    // local finite-difference slope with overlap matching
    double dk = 1e-3 * cn::pi / map_.a_nm;
    Eigen::MatrixXcd vp, vm;
    Eigen::VectorXd np_ = solve_at(kx + dk, 0.0, n_solve, &vp);
    Eigen::VectorXd nm_ = solve_at(kx - dk, 0.0, n_solve, &vm);
    int ip, im;
    (vecs.col(raw).adjoint() * vp).cwiseAbs().transpose().maxCoeff(&ip);
    (vecs.col(raw).adjoint() * vm).cwiseAbs().transpose().maxCoeff(&im);
    vg = cn::two_pi * (np_[ip] - nm_[im]) / (2 * dk) / cn::c_nm_thz;
  }

  // gauge: largest coefficient real positive
  Eigen::VectorXcd h = vecs.col(raw);
  Eigen::Index imax;
  h.cwiseAbs().maxCoeff(&imax);
  std::complex<double> ph = h[imax] / std::abs(h[imax]);
  h /= ph;

  // E in-plane from H_z coefficients: E ~ ( -(ky+Gy), +(kx+Gx) ) h / eps(r)
  std::vector<std::complex<double>> fx(static_cast<size_t>(nx) * ny, 0.0);
  std::vector<std::complex<double>> fy(static_cast<size_t>(nx) * ny, 0.0);
  for (size_t i = 0; i < basis_.size(); ++i) {
    int m = ((basis_.idx[i][0] % nx) + nx) % nx;
    int n = ((basis_.idx[i][1] % ny) + ny) % ny;
    double gx = kx + basis_.g[i][0];
    double gy = 0.0 + basis_.g[i][1];
    fx[static_cast<size_t>(n) * nx + m] += -h[static_cast<Eigen::Index>(i)] * gy;
    fy[static_cast<size_t>(n) * nx + m] += h[static_cast<Eigen::Index>(i)] * gx;
  }
  std::vector<std::complex<double>> gx_grid, gy_grid;
  backward_fft(fx, nx, ny, map_.a_nm, map_.wy_nm, map_.y0_nm, gx_grid);
  backward_fft(fy, nx, ny, map_.a_nm, map_.wy_nm, map_.y0_nm, gy_grid);

  BlochMode mode;
  mode.kx = kx;
  mode.band = band;
  mode.freq_thz = nu[raw];
  mode.vg_over_c = vg;
  mode.nx = nx;
  mode.ny = ny;
  mode.a_nm = map_.a_nm;
  mode.wy_nm = map_.wy_nm;
  mode.y0_nm = map_.y0_nm;
  mode.z_weight_nm = z_weight();
  mode.ex.resize(ny, nx);
  mode.ey.resize(ny, nx);
  const double dx = map_.dx(), dy = map_.dy();
  double norm = 0.0;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      double eps = map_.at(ix, iy);
      std::complex<double> exv = gx_grid[static_cast<size_t>(iy) * nx + ix] / eps;
      std::complex<double> eyv = gy_grid[static_cast<size_t>(iy) * nx + ix] / eps;
      // Bloch phase at the grid point (periodic part was reconstructed)
      double xp = (ix + 0.5) * dx;
      std::complex<double> bloch(std::cos(kx * xp), std::sin(kx * xp));
      mode.ex(iy, ix) = exv * bloch;
      mode.ey(iy, ix) = eyv * bloch;
      norm += eps * (std::norm(exv) + std::norm(eyv));
    }
  }
  norm *= dx * dy * mode.z_weight_nm;
  double scale = 1.0 / std::sqrt(norm);
  mode.ex *= scale;
  mode.ey *= scale;
  mode.norm_nm3 = 1.0;

  // spectra of the periodic part for continuous evaluation
  Eigen::MatrixXcd px(ny, nx), py(ny, nx);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      double xp = (ix + 0.5) * dx;
      std::complex<double> ib(std::cos(kx * xp), -std::sin(kx * xp));
      px(iy, ix) = mode.ex(iy, ix) * ib;
      py(iy, ix) = mode.ey(iy, ix) * ib;
    }
  }
  auto sx = forward_fft(px, nx, ny, map_.a_nm, map_.wy_nm, map_.y0_nm);
  auto sy = forward_fft(py, nx, ny, map_.a_nm, map_.wy_nm, map_.y0_nm);
  mode.ex_hat.resize(ny, nx);
  mode.ey_hat.resize(ny, nx);
  for (int n = 0; n < ny; ++n)
    for (int m = 0; m < nx; ++m) {
      mode.ex_hat(n, m) = sx[static_cast<size_t>(n) * nx + m];
      mode.ey_hat(n, m) = sy[static_cast<size_t>(n) * nx + m];
    }
  return mode;
}

double BandWorkspace::hf_vg_over_c(double kx, double ky, int raw_band) const {
  Eigen::MatrixXcd vecs;
  Eigen::VectorXd nu = solve_at(kx, ky, raw_band + 1, &vecs);
  Eigen::VectorXcd h = vecs.col(raw_band);
  const auto N = static_cast<Eigen::Index>(basis_.size());
  std::complex<double> acc = 0;
  for (Eigen::Index j = 0; j < N; ++j) {
    double txj = kx + basis_.g[static_cast<size_t>(j)][0];
    for (Eigen::Index i = 0; i < N; ++i) {
      double txi = kx + basis_.g[static_cast<size_t>(i)][0];
      acc += std::conj(h[i]) * four_.inv_eps(i, j) * (txi + txj) * h[j];
    }
  }
  double lam = std::pow(nu[raw_band] * cn::two_pi / cn::c_nm_thz, 2);
  double dlam_dk = acc.real();
  return dlam_dk / (2.0 * std::sqrt(lam));
}

// ---------------------------------------------------------------------------

void BlochMode::eval_at(double x_nm, double y_nm, std::complex<double>& out_ex,
                        std::complex<double>& out_ey) const {
  std::vector<double> xs{x_nm}, ys{y_nm};
  std::vector<std::complex<double>> vx, vy;
  eval_grid(xs, ys, vx, vy);
  out_ex = vx[0];
  out_ey = vy[0];
}

void BlochMode::eval_grid(const std::vector<double>& xs, const std::vector<double>& ys,
                          std::vector<std::complex<double>>& out_ex,
                          std::vector<std::complex<double>>& out_ey) const {
  const double b1 = cn::two_pi / a_nm, b2 = cn::two_pi / wy_nm;
  const size_t nxs = xs.size(), nys = ys.size();
  out_ex.assign(nxs * nys, {});
  out_ey.assign(nxs * nys, {});
  std::vector<std::complex<double>> phx(static_cast<size_t>(nx));
  std::vector<std::complex<double>> phy(static_cast<size_t>(ny));
  // per-x partial sums over m: tmx[n], tmy[n]
  Eigen::VectorXcd tmx(ny), tmy(ny);
  for (size_t jx = 0; jx < nxs; ++jx) {
    for (int m = 0; m < nx; ++m) {
      int msig = m <= nx / 2 ? m : m - nx;
      double ph = b1 * msig * xs[jx];
      phx[static_cast<size_t>(m)] = {std::cos(ph), std::sin(ph)};
    }
    for (int n = 0; n < ny; ++n) {
      std::complex<double> ax = 0, ay = 0;
      for (int m = 0; m < nx; ++m) {
        ax += ex_hat(n, m) * phx[static_cast<size_t>(m)];
        ay += ey_hat(n, m) * phx[static_cast<size_t>(m)];
      }
      tmx[n] = ax;
      tmy[n] = ay;
    }
    std::complex<double> bloch(std::cos(kx * xs[jx]), std::sin(kx * xs[jx]));
    for (size_t jy = 0; jy < nys; ++jy) {
      for (int n = 0; n < ny; ++n) {
        int nsig = n <= ny / 2 ? n : n - ny;
        double ph = b2 * nsig * ys[jy];
        phy[static_cast<size_t>(n)] = {std::cos(ph), std::sin(ph)};
      }
      std::complex<double> ax = 0, ay = 0;
      for (int n = 0; n < ny; ++n) {
        ax += tmx[n] * phy[static_cast<size_t>(n)];
        ay += tmy[n] * phy[static_cast<size_t>(n)];
      }
      out_ex[jy * nxs + jx] = ax * bloch;
      out_ey[jy * nxs + jx] = ay * bloch;
    }
  }
}

Field3D extend_to_3d(const BlochMode& mode, const SlabProfile& slab) {
  Field3D f;
  f.mode = mode;
  f.slab = slab;
  // renormalize for the new z profile
  double scale = std::sqrt(mode.z_weight_nm / slab.weight_nm());
  f.mode.ex *= scale;
  f.mode.ey *= scale;
  f.mode.ex_hat *= scale;
  f.mode.ey_hat *= scale;
  f.mode.z_weight_nm = slab.weight_nm();
  return f;
}

double edge_localization(const BlochMode& mode, const lattice::DielectricMap& map, double y_lo_nm,
                         double y_hi_nm) {
  double acc = 0.0;
  for (int iy = 0; iy < map.ny; ++iy) {
    double y = map.y_of(iy);
    if (y < y_lo_nm || y > y_hi_nm) continue;
    for (int ix = 0; ix < map.nx; ++ix)
      acc += map.at(ix, iy) * (std::norm(mode.ex(iy, ix)) + std::norm(mode.ey(iy, ix)));
  }
  return acc * map.dx() * map.dy() * mode.z_weight_nm / mode.norm_nm3;
}

ProjectedGap projected_bulk_gap(const lattice::StructureParams& p, double eps_slab,
                                const std::vector<double>& k_list, int nx_grid, int n_ky,
                                int n_bands, int threads, double cutoff_over_b1) {
  auto cell = lattice::build_bulk_cell(p, nx_grid, eps_slab);
  auto basis = ReciprocalBasis::make_rel(cell.a_nm, cell.wy_nm, cutoff_over_b1);
  BandWorkspace ws(std::move(cell), basis, std::nullopt, threads);
  const double ky_max = cn::pi / (p.a_nm * cn::sqrt3);

  const int nk = static_cast<int>(k_list.size());
  std::vector<std::vector<double>> freqs(static_cast<size_t>(nk));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int ik = next.fetch_add(1);
      if (ik >= nk) return;
      std::vector<double>& fk = freqs[static_cast<size_t>(ik)];
      for (int j = 0; j < n_ky; ++j) {
        double ky = ky_max * j / (n_ky - 1);
        Eigen::VectorXd nu = ws.solve_at(k_list[static_cast<size_t>(ik)], ky, n_bands);
        for (int b = 0; b < n_bands; ++b) fk.push_back(nu[b]);
      }
      std::sort(fk.begin(), fk.end());
    }
  };
  int nthr = std::min(ws.threads(), nk);
  std::vector<std::thread> pool;
  for (int t = 1; t < nthr; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<double> all;
  for (auto& fk : freqs) all.insert(all.end(), fk.begin(), fk.end());
  std::sort(all.begin(), all.end());

  ProjectedGap gap;
  gap.kx = k_list;
  // largest spectral hole, excluding the trivial one below the first band
  double best = 0.0;
  size_t ibest = 0;
  for (size_t i = 1; i + 1 < all.size(); ++i) {
    double d = all[i + 1] - all[i];
    if (d > best) {
      best = d;
      ibest = i;
    }
  }
  if (best <= 0.0) return gap;
  gap.lo_thz = all[ibest];
  gap.hi_thz = all[ibest + 1];
  gap.found = (gap.hi_thz - gap.lo_thz) > 0.01 * (gap.hi_thz + gap.lo_thz) / 2;
  gap.lower_thz.resize(static_cast<size_t>(nk));
  gap.upper_thz.resize(static_cast<size_t>(nk));
  for (int ik = 0; ik < nk; ++ik) {
    const auto& fk = freqs[static_cast<size_t>(ik)];
    // per-kx bounds: top of lower continuum / bottom of upper continuum
    double lower = -1e300, upper = 1e300;
    for (double f : fk) {
      if (f <= gap.lo_thz + 1e-9) lower = std::max(lower, f);
      if (f >= gap.hi_thz - 1e-9) upper = std::min(upper, f);
    }
    gap.lower_thz[static_cast<size_t>(ik)] = lower;
    gap.upper_thz[static_cast<size_t>(ik)] = upper;
  }
  return gap;
}

std::vector<GuidedBand> find_guided_bands(const BandWorkspace& ws, const BandSet& bands,
                                          const ProjectedGap& gap, double k_ref_over_pi_a,
                                          double min_localization, double min_inside_fraction) {
  std::vector<GuidedBand> out;
  if (!gap.found) return out;
  const int nk = bands.n_k();
  double k_ref = k_ref_over_pi_a * cn::pi / bands.a_nm;
  int ik_ref = bands.nearest_k_index(k_ref);
  const auto& p_map = ws.map();
  // defect window: vacuum tail through the first few hole rows
  double y_lo = -2.0 * bands.a_nm;
  double y_hi = p_map.wy_nm + p_map.y0_nm;  // top of cell
  // restrict to the lower half of the patterned region
  y_hi = std::min(y_hi, 0.5 * (p_map.wy_nm + p_map.y0_nm));

  for (int b = 0; b < bands.n_bands(); ++b) {
    int inside = 0;
    double fmin = 1e300, fmax = -1e300;
    for (int ik = 0; ik < nk; ++ik) {
      double f = bands.freq_thz(ik, b);
      fmin = std::min(fmin, f);
      fmax = std::max(fmax, f);
      if (f > gap.lower_thz[static_cast<size_t>(ik)] + 1e-9 &&
          f < gap.upper_thz[static_cast<size_t>(ik)] - 1e-9)
        ++inside;
    }
    double frac = static_cast<double>(inside) / nk;
    if (frac < min_inside_fraction) continue;
    BlochMode mode = ws.bloch_field(bands.k_list[static_cast<size_t>(ik_ref)], b, &bands);
    double loc = edge_localization(mode, p_map, y_lo, y_hi);
    if (loc < min_localization) continue;
    out.push_back(GuidedBand{b, loc, fmin, fmax, frac});
  }
  return out;
}

}  // namespace slf::pwe
