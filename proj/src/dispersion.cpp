#include "slf/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "slf/errors.hpp"
#include "slf/slab.hpp"

namespace slf::dispersion {

namespace cn = slf::constants;

DispersionReport group_index_curve(const pwe::BandSet& bands, int band, double min_ng) {
  if (bands.n_k() < 8) throw ConfigError("group_index_curve: band must be tracked over >= 8 samples");
  DispersionReport rep;
  std::vector<std::array<double, 2>> pts;
  for (int ik = 0; ik < bands.n_k(); ++ik) {
    double vg = bands.vg_over_c(ik, band);
    double ng = 1.0 / std::max(std::abs(vg), 1e-12);
    pts.push_back({bands.freq_thz(ik, band), ng});
  }
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  rep.ng_of_freq = pts;

  // widest window [i..j] (>= 3 samples) with (max-min)/(max+min) <= 0.15 and
  // center >= min_ng
  const int n = static_cast<int>(pts.size());
  double best_width = -1.0;
  int bi = -1, bj = -1;
  for (int i = 0; i < n; ++i) {
    double lo = pts[static_cast<size_t>(i)][1], hi = lo;
    for (int j = i + 1; j < n; ++j) {
      lo = std::min(lo, pts[static_cast<size_t>(j)][1]);
      hi = std::max(hi, pts[static_cast<size_t>(j)][1]);
      if ((hi - lo) > 0.15 * (hi + lo)) break;
      double center = 0.5 * (hi + lo);
      if (j - i + 1 >= 3 && center >= min_ng) {
        double width = pts[static_cast<size_t>(j)][0] - pts[static_cast<size_t>(i)][0];
        if (width > best_width) {
          best_width = width;
          bi = i;
          bj = j;
        }
      }
    }
  }
  if (bi < 0) throw NoPlateauError("group_index_curve: no 3-sample window meets the 15% criterion");

  double lo = 1e300, hi = -1e300;
  for (int k = bi; k <= bj; ++k) {
    lo = std::min(lo, pts[static_cast<size_t>(k)][1]);
    hi = std::max(hi, pts[static_cast<size_t>(k)][1]);
  }
  Plateau pl;
  pl.nu_min_thz = pts[static_cast<size_t>(bi)][0];
  pl.nu_max_thz = pts[static_cast<size_t>(bj)][0];
  pl.ng_center = 0.5 * (lo + hi);
  rep.plateau = pl;
  rep.plateau_width_nm = std::abs(cn::c_nm_thz / pl.nu_min_thz - cn::c_nm_thz / pl.nu_max_thz);
  double acc = 0.0;
  int cnt = 0;
  for (int k = bi; k < bj; ++k) {
    double dnu = pts[static_cast<size_t>(k + 1)][0] - pts[static_cast<size_t>(k)][0];
    if (dnu == 0) continue;
    double d = (pts[static_cast<size_t>(k + 1)][1] - pts[static_cast<size_t>(k)][1]) / dnu;
    acc += d * d;
    ++cnt;
  }
  rep.gvd_rms = cnt ? std::sqrt(acc / cnt) : 0.0;
  return rep;
}

std::array<double, 6> params_vector(const lattice::StructureParams& p) {
  std::array<double, 6> v{};
  for (const auto& r : p.rows) {
    if (r.index >= 1 && r.index <= 3) {
      v[static_cast<size_t>(2 * (r.index - 1))] = r.dy_nm;
      v[static_cast<size_t>(2 * (r.index - 1) + 1)] = r.dr_nm;
    }
  }
  return v;
}

lattice::StructureParams with_params(const lattice::StructureParams& base,
                                     const std::array<double, 6>& v) {
  lattice::StructureParams p = base;
  p.rows.clear();
  for (int i = 0; i < 3; ++i)
    p.rows.push_back(lattice::RowPerturbation{i + 1, v[static_cast<size_t>(2 * i)],
                                              v[static_cast<size_t>(2 * i + 1)]});
  return p;
}

std::optional<SlowBandScan> slow_band_scan(const lattice::StructureParams& p,
                                           const SolverSettings& s,
                                           const std::array<double, 2>& k_window) {
  lattice::StructureParams q = p;
  q.n_rows = s.n_rows;
  q.w_vac_nm = s.w_vac_nm;
  try {
    q.validate();
  } catch (const ConfigError&) {
    return std::nullopt;
  }

  auto slab = pwe::slab_effective_index(q.n_slab, q.t_nm, 780.241);
  double eps_eff = slab.n_eff * slab.n_eff;
  lattice::GridSpec grid;
  grid.nx = s.nx;
  auto map = lattice::build_structure(q, grid, eps_eff);
  auto basis = pwe::ReciprocalBasis::make_rel(map.a_nm, map.wy_nm, s.cutoff_over_b1);
  pwe::BandWorkspace ws(std::move(map), basis, slab, s.threads);

  std::vector<double> ks;
  for (int i = 0; i < s.n_k; ++i)
    ks.push_back((k_window[0] + (k_window[1] - k_window[0]) * i / (s.n_k - 1)) * cn::pi / q.a_nm);
  auto bands = ws.solve_bands(ks, s.n_bands);

  // identify localized in-gap candidates at the window midpoint
  static thread_local struct {
    double key = -1;
    pwe::ProjectedGap gap;
  } gap_cache;
  double key = q.a_nm * 1e6 + q.r_nm * 1e3 + q.n_slab;  // bulk crystal fingerprint
  if (gap_cache.key != key) {
    gap_cache.gap = pwe::projected_bulk_gap(q, eps_eff, ks, 32, 8, 8, s.threads, s.cutoff_over_b1);
    gap_cache.key = key;
  }
  const auto& gap = gap_cache.gap;
  if (!gap.found) return std::nullopt;

  int ik_ref = bands.n_k() / 2;
  double kref = bands.k_list[static_cast<size_t>(ik_ref)];
  std::vector<int> candidates;
  for (int b = 0; b < bands.n_bands(); ++b) {
    int inside = 0;
    for (int ik = 0; ik < bands.n_k(); ++ik) {
      double f = bands.freq_thz(ik, b);
      if (f > gap.lower_thz[static_cast<size_t>(ik)] && f < gap.upper_thz[static_cast<size_t>(ik)])
        ++inside;
    }
    if (inside < (2 * bands.n_k()) / 3) continue;
    auto mode = ws.bloch_field(kref, b, &bands);
    double loc = pwe::edge_localization(mode, ws.map(), -2 * q.a_nm,
                                        q.L_nm + 2.5 * q.row_pitch());
    if (loc >= s.min_localization) candidates.push_back(b);
  }
  if (static_cast<int>(candidates.size()) < s.guided_ordinal) return std::nullopt;
  // candidates are in ascending tracked-band (frequency) order already
  std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    return bands.freq_thz(ik_ref, a) < bands.freq_thz(ik_ref, b);
  });
  int band = candidates[static_cast<size_t>(s.guided_ordinal - 1)];

  SlowBandScan scan;
  scan.band = band;
  for (int ik = 0; ik < bands.n_k(); ++ik) {
    scan.k_over_pi_a.push_back(bands.k_over_pi_a(ik));
    scan.ng.push_back(1.0 / std::max(std::abs(bands.vg_over_c(ik, band)), 1e-12));
    scan.freq_thz.push_back(bands.freq_thz(ik, band));
  }
  return scan;
}

double cost(const lattice::StructureParams& p, const OptimizationSpec& spec) {
  auto scan = slow_band_scan(p, spec.solver, spec.k_window);
  if (!scan) return 1e6;
  const auto& ng = scan->ng;
  const int n = static_cast<int>(ng.size());
  double t1 = 0.0;
  for (double g : ng) t1 += (g - spec.target_ng) * (g - spec.target_ng);
  t1 /= n * spec.target_ng * spec.target_ng;
  // slope wrt dimensionless ka
  double t2 = 0.0;
  int cnt = 0;
  for (int i = 0; i + 1 < n; ++i) {
    double dka = (scan->k_over_pi_a[static_cast<size_t>(i + 1)] -
                  scan->k_over_pi_a[static_cast<size_t>(i)]) * cn::pi;
    double d = (ng[static_cast<size_t>(i + 1)] - ng[static_cast<size_t>(i)]) / dka;
    t2 += d * d;
    ++cnt;
  }
  t2 /= std::max(1, cnt);
  return spec.w_ng * t1 + spec.w_gvd * t2;
}

// ---------------------------------------------------------------------------

namespace {

struct NmOpts {
  int max_iters;
  double tol;
};

void clip(std::vector<double>& x, const std::vector<std::array<double, 2>>& b) {
  for (size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], b[i][0], b[i][1]);
}

}  // namespace

EngineResult minimize_box(const std::function<double(const std::vector<double>&)>& fn,
                          std::vector<double> x0,
                          const std::vector<std::array<double, 2>>& bounds, int max_iters,
                          double tol, int restarts, unsigned long long seed, double polish_step) {
  const size_t dim = x0.size();
  EngineResult res;
  res.evaluations = 0;
  int iter_counter = 0;
  auto eval = [&](const std::vector<double>& x) {
    double f = fn(x);
    ++res.evaluations;
    TraceEntry te;
    te.iter = iter_counter++;
    te.cost = f;
    for (size_t i = 0; i < std::min<size_t>(6, x.size()); ++i) te.params[i] = x[i];
    res.trace.push_back(te);
    return f;
  };

  clip(x0, bounds);
  bool degenerate = true;
  for (size_t i = 0; i < dim; ++i)
    if (bounds[i][1] > bounds[i][0]) degenerate = false;
  if (degenerate) {
    res.x = x0;
    res.fx = eval(x0);
    res.converged = true;
    return res;
  }

  std::mt19937_64 rng(seed);
  res.x = x0;
  res.fx = 1e300;
  bool hit_max = false;

  for (int rs = 0; rs <= restarts; ++rs) {
    std::vector<double> start = x0;
    if (rs > 0) {
      for (size_t i = 0; i < dim; ++i) {
        std::uniform_real_distribution<double> u(bounds[i][0], bounds[i][1]);
        start[i] = bounds[i][1] > bounds[i][0] ? u(rng) : bounds[i][0];
      }
    }
    // initial simplex
    std::vector<std::vector<double>> xs(dim + 1, start);
    for (size_t i = 0; i < dim; ++i) {
      double step = 0.2 * (bounds[i][1] - bounds[i][0]);
      if (step == 0) step = 1e-12;
      xs[i + 1][i] = std::clamp(start[i] + step, bounds[i][0], bounds[i][1]);
      if (xs[i + 1][i] == start[i])
        xs[i + 1][i] = std::clamp(start[i] - step, bounds[i][0], bounds[i][1]);
    }
    std::vector<double> fs(dim + 1);
    for (size_t i = 0; i <= dim; ++i) fs[i] = eval(xs[i]);

    int budget = max_iters;
    while (budget-- > 0) {
      // order
      std::vector<size_t> idx(dim + 1);
      for (size_t i = 0; i <= dim; ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return fs[a] < fs[b]; });
      std::vector<std::vector<double>> xs2;
      std::vector<double> fs2;
      for (size_t i = 0; i <= dim; ++i) {
        xs2.push_back(xs[idx[i]]);
        fs2.push_back(fs[idx[i]]);
      }
      xs = xs2;
      fs = fs2;
      if (std::abs(fs[dim] - fs[0]) < tol * (std::abs(fs[0]) + tol)) break;

      std::vector<double> cen(dim, 0.0);
      for (size_t i = 0; i < dim; ++i) {
        for (size_t j = 0; j < dim; ++j) cen[j] += xs[i][j];
      }
      for (size_t j = 0; j < dim; ++j) cen[j] /= static_cast<double>(dim);

      auto affine = [&](double tc) {
        std::vector<double> x(dim);
        for (size_t j = 0; j < dim; ++j) x[j] = cen[j] + tc * (xs[dim][j] - cen[j]);
        clip(x, bounds);
        return x;
      };
      auto xr = affine(-1.0);
      double fr = eval(xr);
      if (fr < fs[0]) {
        auto xe = affine(-2.0);
        double fe = eval(xe);
        if (fe < fr) {
          xs[dim] = xe;
          fs[dim] = fe;
        } else {
          xs[dim] = xr;
          fs[dim] = fr;
        }
      } else if (fr < fs[dim - 1]) {
        xs[dim] = xr;
        fs[dim] = fr;
      } else {
        auto xc = affine(fr < fs[dim] ? -0.5 : 0.5);
        double fc = eval(xc);
        if (fc < std::min(fr, fs[dim])) {
          xs[dim] = xc;
          fs[dim] = fc;
        } else {
          for (size_t i = 1; i <= dim; ++i) {
            for (size_t j = 0; j < dim; ++j) xs[i][j] = xs[0][j] + 0.5 * (xs[i][j] - xs[0][j]);
            fs[i] = eval(xs[i]);
          }
        }
      }
    }
    if (budget <= 0) hit_max = true;
    auto l2 = [](const std::vector<double>& v) {
      double s = 0;
      for (double a : v) s += a * a;
      return s;
    };
    for (size_t i = 0; i <= dim; ++i) {
      // equal-cost tie-break: smallest ||x||_2 (least perturbation)
      if (fs[i] < res.fx || (fs[i] == res.fx && l2(xs[i]) < l2(res.x))) {
        res.fx = fs[i];
        res.x = xs[i];
      }
    }
  }

  // coordinate-wise polish with a fixed step
  bool improved = true;
  int guard = 0;
  while (improved && guard++ < 12) {
    improved = false;
    for (size_t i = 0; i < dim; ++i) {
      for (double sgn : {+1.0, -1.0}) {
        std::vector<double> x = res.x;
        x[i] = std::clamp(x[i] + sgn * polish_step, bounds[i][0], bounds[i][1]);
        if (x[i] == res.x[i]) continue;
        double f = eval(x);
        if (f < res.fx) {
          res.fx = f;
          res.x = x;
          improved = true;
        }
      }
    }
  }
  res.converged = !hit_max;
  return res;
}

OptResult optimize(const lattice::StructureParams& p0, const OptimizationSpec& spec) {
  auto v0 = params_vector(p0);
  std::vector<double> x0(v0.begin(), v0.end());
  std::vector<std::array<double, 2>> bounds(spec.bounds.begin(), spec.bounds.end());

  auto fn = [&](const std::vector<double>& x) {
    std::array<double, 6> v{};
    std::copy_n(x.begin(), 6, v.begin());
    return cost(with_params(p0, v), spec);
  };
  EngineResult er = minimize_box(fn, x0, bounds, spec.max_iters, spec.tol, spec.restarts,
                                 spec.seed, 0.25);

  OptResult out;
  std::array<double, 6> vbest{};
  std::copy_n(er.x.begin(), 6, vbest.begin());
  out.params = with_params(p0, vbest);
  out.params.validate();  // optimize never returns invalid parameters
  out.best_cost = er.fx;
  out.initial_cost = er.trace.empty() ? er.fx : er.trace.front().cost;
  out.trace = std::move(er.trace);
  out.converged = er.converged;
  out.evaluations = er.evaluations;
  return out;
}

}  // namespace slf::dispersion
