#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "slf/geometry.hpp"
#include "slf/pwe.hpp"

namespace slf::dispersion {

struct Plateau {
  double nu_min_thz = 0, nu_max_thz = 0;
  double ng_center = 0;
};

struct DispersionReport {
  std::vector<std::array<double, 2>> ng_of_freq;  // (nu_THz, ng) sorted by nu
  std::optional<Plateau> plateau;
  double plateau_width_nm = 0;
  double gvd_rms = 0;  // RMS of d ng / d nu over the plateau (1/THz)
};

// Widest frequency window where |ng - center| <= 0.15 * center over >= 3
// consecutive samples, restricted to slow-light plateaus (center >= min_ng).
// Throws NoPlateauError when nothing qualifies. ng is taken as c/|vg|.
DispersionReport group_index_curve(const pwe::BandSet& bands, int band, double min_ng = 15.0);

// Reduced-resolution solver settings used inside the cost function.
struct SolverSettings {
  int nx = 32;
  double cutoff_over_b1 = 4.5;
  int n_rows = 8;
  double w_vac_nm = 700.0;
  int n_bands = 22;
  int n_k = 11;
  int threads = 0;
  int guided_ordinal = 2;  // which localized in-gap band is "the slow mode" (1-based)
  double min_localization = 0.35;
};

struct OptimizationSpec {
  double target_ng = 30.0;
  std::array<double, 2> k_window = {0.6, 0.95};  // units of pi/a
  double w_ng = 1.0;
  double w_gvd = 4.0;
  // bounds per parameter, order (dy1, dr1, dy2, dr2, dy3, dr3)
  std::array<std::array<double, 2>, 6> bounds = {{{-20, 60}, {-16, 18},
                                                  {-20, 60}, {-16, 18},
                                                  {-20, 20}, {-16, 12}}};
  int max_iters = 400;
  double tol = 1e-6;
  int restarts = 3;
  unsigned long long seed = 12345;
  SolverSettings solver;
};

std::array<double, 6> params_vector(const lattice::StructureParams& p);
lattice::StructureParams with_params(const lattice::StructureParams& base,
                                     const std::array<double, 6>& v);

// Band-flattening objective; 1e6 penalty when lattice invariants fail or the
// slow band cannot be identified.
double cost(const lattice::StructureParams& p, const OptimizationSpec& spec);

// ng(k) of the slow band over the k window, via the reduced solver.
struct SlowBandScan {
  std::vector<double> k_over_pi_a;
  std::vector<double> ng;
  std::vector<double> freq_thz;
  int band = -1;
};
std::optional<SlowBandScan> slow_band_scan(const lattice::StructureParams& p,
                                           const SolverSettings& s,
                                           const std::array<double, 2>& k_window);

struct TraceEntry {
  int iter = 0;
  double cost = 0;
  std::array<double, 6> params{};
};

struct OptResult {
  lattice::StructureParams params;
  double best_cost = 0;
  double initial_cost = 0;
  std::vector<TraceEntry> trace;
  bool converged = false;
  int evaluations = 0;
};

OptResult optimize(const lattice::StructureParams& p0, const OptimizationSpec& spec);

// Derivative-free engine (Nelder-Mead in a box + coordinate polish), exposed
// for oracle tests on synthetic objectives.
struct EngineResult {
  std::vector<double> x;
  double fx = 0;
  std::vector<TraceEntry> trace;
  bool converged = false;
  int evaluations = 0;
};
EngineResult minimize_box(const std::function<double(const std::vector<double>&)>& fn,
                          std::vector<double> x0,
                          const std::vector<std::array<double, 2>>& bounds, int max_iters,
                          double tol, int restarts, unsigned long long seed,
                          double polish_step = 0.25);

}  // namespace slf::dispersion
