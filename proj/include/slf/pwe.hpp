#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "slf/fourier.hpp"
#include "slf/geometry.hpp"
#include "slf/slab.hpp"

namespace slf::pwe {

// Tracked band structure along kx in [0, pi/a].
struct BandSet {
  std::vector<double> k_list;  // rad/nm
  double a_nm = 0;
  Eigen::MatrixXd freq_thz;    // (nk x nb), tracked
  Eigen::MatrixXd vg_over_c;   // central finite differences, one-sided at ends
  std::vector<std::vector<int>> perm;  // perm[ik][tracked] = raw index
  std::vector<std::string> warnings;

  int n_k() const { return static_cast<int>(k_list.size()); }
  int n_bands() const { return static_cast<int>(freq_thz.cols()); }
  double k_over_pi_a(int ik) const;
  // frequency of a tracked band at arbitrary kx by linear interpolation
  double freq_at(double kx, int band) const;
  double vg_at(double kx, int band) const;
  int nearest_k_index(double kx) const;
};

// One Bloch mode: complex in-plane fields on the supercell grid, normalized so
// that  sum eps |E|^2 dx dy * z_weight = 1  (lengths in nm).
struct BlochMode {
  double kx = 0;            // rad/nm
  int band = 0;             // tracked index it was requested as
  double freq_thz = 0;
  double vg_over_c = 0;
  int nx = 0, ny = 0;
  double a_nm = 0, wy_nm = 0, y0_nm = 0;
  double z_weight_nm = 1.0;
  Eigen::MatrixXcd ex, ey;        // (ny x nx), periodic part times Bloch phase at grid points
  Eigen::MatrixXcd ex_hat, ey_hat;  // spectra of the periodic part (ny x nx)
  double norm_nm3 = 1.0;          // normalization integral after scaling

  // continuous evaluation (trigonometric interpolation x Bloch phase)
  void eval_at(double x_nm, double y_nm, std::complex<double>& out_ex,
               std::complex<double>& out_ey) const;
  // factorized evaluation on a separable grid; outputs row-major [iy*nx_pts+ix]
  void eval_grid(const std::vector<double>& xs, const std::vector<double>& ys,
                 std::vector<std::complex<double>>& out_ex,
                 std::vector<std::complex<double>>& out_ey) const;
};

// 3D extension E3(x,y,z) = E2(x,y) * f(z); normalization per mode convention.
struct Field3D {
  BlochMode mode;
  SlabProfile slab;
};

Field3D extend_to_3d(const BlochMode& mode, const SlabProfile& slab);

// Per-kx projected bulk continuum and the gap between continuum groups.
struct ProjectedGap {
  double lo_thz = 0, hi_thz = 0;  // global projected gap over the k window
  std::vector<double> kx;         // sample points
  std::vector<double> lower_thz;  // top of the lower continuum at each kx
  std::vector<double> upper_thz;  // bottom of the upper continuum at each kx
  bool found = false;
};

struct GuidedBand {
  int band = 0;                  // tracked index in the BandSet
  double localization = 0;       // eps|E|^2 fraction in the edge window at k_ref
  double freq_min_thz = 0, freq_max_thz = 0;
  double inside_fraction = 0;    // fraction of k samples with freq inside the gap
};

// Caches the dielectric Fourier matrices for one structure; all solves and
// field reconstructions go through here. Immutable after construction; k-point
// solves are independent and run on an internal thread pool.
class BandWorkspace {
 public:
  BandWorkspace(lattice::DielectricMap map, ReciprocalBasis basis,
                std::optional<SlabProfile> slab = std::nullopt, int threads = 0);

  const lattice::DielectricMap& map() const { return map_; }
  const ReciprocalBasis& basis() const { return basis_; }
  const EpsFourier& fourier() const { return four_; }
  const std::optional<SlabProfile>& slab() const { return slab_; }
  double z_weight() const;

  // Hermitian plane-wave operator at Bloch vector (kx, ky).
  Eigen::MatrixXcd assemble(double kx, double ky) const;
  // lowest n_bands frequencies (THz) at (kx, ky); eigenvectors optional
  Eigen::VectorXd solve_at(double kx, double ky, int n_bands,
                           Eigen::MatrixXcd* vecs = nullptr) const;

  BandSet solve_bands(const std::vector<double>& k_list, int n_bands) const;

  // field of (tracked) band at a k sample of ctx, or raw band index without ctx
  BlochMode bloch_field(double kx, int band, const BandSet* ctx = nullptr) const;

  // Hellmann-Feynman group velocity from an eigenpair (oracle cross-check)
  double hf_vg_over_c(double kx, double ky, int raw_band) const;

  int threads() const { return threads_; }

 private:
  lattice::DielectricMap map_;
  ReciprocalBasis basis_;
  EpsFourier four_;
  std::optional<SlabProfile> slab_;
  int threads_;
};

// fraction of eps|E|^2 within y in [y_lo, y_hi]
double edge_localization(const BlochMode& mode, const lattice::DielectricMap& map,
                         double y_lo_nm, double y_hi_nm);

// Projected gap of the bulk crystal over kx in k_list, from 2-hole-cell scans.
ProjectedGap projected_bulk_gap(const lattice::StructureParams& p, double eps_slab,
                                const std::vector<double>& k_list, int nx_grid = 32,
                                int n_ky = 12, int n_bands = 8, int threads = 0,
                                double cutoff_over_b1 = 5.0);

// Guided bands: inside the projected gap and localized at the lower edge.
std::vector<GuidedBand> find_guided_bands(const BandWorkspace& ws, const BandSet& bands,
                                          const ProjectedGap& gap, double k_ref_over_pi_a = 0.75,
                                          double min_localization = 0.5,
                                          double min_inside_fraction = 0.5);

}  // namespace slf::pwe
