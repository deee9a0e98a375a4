#include "slf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slf/errors.hpp"

namespace slf::lattice {

namespace {

double wrap_dx(double dx, double period) {
  dx = std::fmod(dx, period);
  if (dx > period / 2) dx -= period;
  if (dx < -period / 2) dx += period;
  return dx;
}

}  // namespace

double StructureParams::row_dy(int i) const {
  for (const auto& r : rows)
    if (r.index == i) return dy_away_from_edge ? r.dy_nm : -r.dy_nm;
  return 0.0;
}

double StructureParams::row_radius(int i) const {
  double dr = 0.0;
  for (const auto& r : rows)
    if (r.index == i) dr = r.dr_nm;
  return r_nm + dr;
}

double StructureParams::row_y(int i) const {
  return L_nm + (i - 1) * row_pitch() + row_dy(i);
}

void StructureParams::validate() const {
  if (a_nm <= 0) throw ConfigError("structure.a_nm must be > 0");
  if (t_nm <= 0) throw ConfigError("structure.t_nm must be > 0");
  if (L_nm < 0) throw ConfigError("structure.L_nm must be >= 0");
  if (n_slab <= 1) throw ConfigError("structure.n_slab must be > 1");
  if (n_rows < 1) throw ConfigError("structure.n_rows must be >= 1");
  if (w_vac_nm <= 0) throw ConfigError("structure.w_vac_nm must be > 0");

  std::vector<bool> seen(4, false);
  for (const auto& r : rows) {
    if (r.index < 1) throw ConfigError("structure.rows[].index must be >= 1");
    if (r.index > 3) {
      if (r.dy_nm != 0.0 || r.dr_nm != 0.0)
        throw ConfigError("structure.rows[].index: only rows 1..3 may carry perturbations (row " +
                          std::to_string(r.index) + ")");
      continue;
    }
    if (seen[static_cast<size_t>(r.index)])
      throw ConfigError("structure.rows[].index: duplicate row " + std::to_string(r.index));
    seen[static_cast<size_t>(r.index)] = true;
  }

  for (int i = 1; i <= n_rows; ++i) {
    if (row_radius(i) <= 0)
      throw OverlapError("row " + std::to_string(i) + ": effective radius r+dr <= 0");
    if (2 * row_radius(i) >= a_nm)
      throw OverlapError("row " + std::to_string(i) + ": holes overlap within the row (2r >= a)");
  }
  // first-row hole must not cross the slab edge at y = 0
  if (row_y(1) - row_radius(1) <= 0)
    throw OverlapError("row 1 hole crosses the slab edge (y_center - r <= 0)");
  // adjacent rows: centers are offset by a/2 in x and one pitch (+dy delta) in y
  for (int i = 1; i < n_rows; ++i) {
    double dyc = row_y(i + 1) - row_y(i);
    double dist = std::hypot(a_nm / 2.0, dyc);
    if (dist <= row_radius(i) + row_radius(i + 1))
      throw OverlapError("rows " + std::to_string(i) + "/" + std::to_string(i + 1) +
                         " holes overlap (center distance " + std::to_string(dist) + ")");
  }
  // second-neighbor rows share the same x offset
  for (int i = 1; i + 2 <= n_rows; ++i) {
    double dyc = row_y(i + 2) - row_y(i);
    if (std::abs(dyc) <= row_radius(i) + row_radius(i + 2))
      throw OverlapError("rows " + std::to_string(i) + "/" + std::to_string(i + 2) +
                         " holes overlap");
  }
  // last row must stay inside the cap
  if (row_y(n_rows) + row_radius(n_rows) >= cell_height() - w_vac_nm)
    throw OverlapError("last row crosses the supercell top; increase w_cap");
}

std::vector<Hole> hole_list(const StructureParams& p) {
  std::vector<Hole> holes;
  holes.reserve(static_cast<size_t>(p.n_rows));
  for (int i = 1; i <= p.n_rows; ++i)
    holes.push_back(Hole{p.row_x(i), p.row_y(i), p.row_radius(i)});
  return holes;
}

double DielectricMap::mean_eps() const {
  double s = 0.0;
  for (double e : eps) s += e;
  return s / static_cast<double>(eps.size());
}

double DielectricMap::sample(double x, double y) const {
  double fx = (x - 0.5 * dx()) / dx();
  double fy = (y - y0_nm - 0.5 * dy()) / dy();
  auto wrap = [](long i, int n) {
    long m = i % n;
    return static_cast<int>(m < 0 ? m + n : m);
  };
  int ix = wrap(std::lround(fx), nx);
  int iy = wrap(std::lround(fy), ny);
  return at(ix, iy);
}

namespace {

// area fraction of the cell [x0,x0+dx]x[y0,y0+dy] covered by circles, by
// subsampling; x-periodic with period a
double cell_coverage(double xc, double yc, double dx, double dy,
                     const std::vector<Hole>& holes, double a, int ss) {
  int inside = 0;
  for (int sy = 0; sy < ss; ++sy) {
    double y = yc + ((sy + 0.5) / ss - 0.5) * dy;
    for (int sx = 0; sx < ss; ++sx) {
      double x = xc + ((sx + 0.5) / ss - 0.5) * dx;
      for (const auto& h : holes) {
        double ddx = wrap_dx(x - h.x_nm, a);
        double ddy = y - h.y_nm;
        if (ddx * ddx + ddy * ddy < h.r_nm * h.r_nm) {
          ++inside;
          break;
        }
      }
    }
  }
  return static_cast<double>(inside) / (ss * ss);
}

}  // namespace

DielectricMap build_structure(const StructureParams& p, const GridSpec& grid, double eps_slab) {
  p.validate();
  if (grid.nx < 32) throw ResolutionError("grid.nx must give >= 32 points per period a");
  double wy = p.cell_height();
  int ny = grid.ny;
  if (ny <= 0) ny = static_cast<int>(std::ceil(wy / (p.a_nm / grid.nx)));
  if (wy / ny > 2.0 * (p.a_nm / grid.nx))
    throw ResolutionError("grid.ny too coarse relative to nx");

  DielectricMap map;
  map.nx = grid.nx;
  map.ny = ny;
  map.a_nm = p.a_nm;
  map.wy_nm = wy;
  map.y0_nm = -p.w_vac_nm;
  map.eps.assign(static_cast<size_t>(grid.nx) * ny, 1.0);

  auto holes = hole_list(p);
  double dx = map.dx(), dy = map.dy();
  double cell_rad = 0.5 * std::hypot(dx, dy);
  int ss = std::max(2, grid.supersample);

  for (int iy = 0; iy < ny; ++iy) {
    double y = map.y_of(iy);
    for (int ix = 0; ix < grid.nx; ++ix) {
      double x = map.x_of(ix);
      if (y < 0.0) continue;  // vacuum below the edge
      // nearest hole distance decides bulk/boundary/hole
      double cover = -1.0;
      for (const auto& h : holes) {
        double ddx = wrap_dx(x - h.x_nm, p.a_nm);
        double d = std::hypot(ddx, y - h.y_nm);
        if (d < h.r_nm - cell_rad) {
          cover = 1.0;
          break;
        }
        if (d < h.r_nm + cell_rad) cover = -2.0;  // boundary cell
      }
      double frac;
      if (cover == 1.0) frac = 1.0;
      else if (cover == -2.0) frac = cell_coverage(x, y, dx, dy, holes, p.a_nm, ss);
      else frac = 0.0;
      map.at(ix, iy) = frac * 1.0 + (1.0 - frac) * eps_slab;
    }
  }
  // cells straddling the slab edge y=0: area-weighted along y
  for (int iy = 0; iy < ny; ++iy) {
    double ylo = map.y0_nm + iy * dy, yhi = ylo + dy;
    if (ylo < 0.0 && yhi > 0.0) {
      double f_diel = yhi / dy;  // fraction of the cell above y=0
      for (int ix = 0; ix < grid.nx; ++ix) {
        double x = map.x_of(ix);
        // the dielectric part of the cell may still be inside a hole (not
        // possible per validate(): first row rim is above y=0), so blend flat
        (void)x;
        map.at(ix, iy) = f_diel * eps_slab + (1.0 - f_diel) * 1.0;
      }
    }
  }
  return map;
}

DielectricMap uniform_map(double eps, double a_nm, double wy_nm, int nx, int ny, double y0_nm) {
  DielectricMap m;
  m.nx = nx;
  m.ny = ny;
  m.a_nm = a_nm;
  m.wy_nm = wy_nm;
  m.y0_nm = y0_nm;
  m.eps.assign(static_cast<size_t>(nx) * ny, eps);
  return m;
}

DielectricMap build_bulk_cell(const StructureParams& p, int nx, double eps_slab, int supersample) {
  double wy = p.a_nm * constants::sqrt3;
  int ny = static_cast<int>(std::lround(nx * constants::sqrt3));
  DielectricMap map;
  map.nx = nx;
  map.ny = ny;
  map.a_nm = p.a_nm;
  map.wy_nm = wy;
  map.y0_nm = 0.0;
  map.eps.assign(static_cast<size_t>(nx) * ny, eps_slab);

  std::vector<Hole> holes = {
      {p.a_nm / 2.0, 0.0, p.r_nm},
      {p.a_nm / 2.0, wy, p.r_nm},  // periodic image of the first
      {0.0, wy / 2.0, p.r_nm},
      {p.a_nm, wy / 2.0, p.r_nm},
  };
  double dx = map.dx(), dy = map.dy();
  double cell_rad = 0.5 * std::hypot(dx, dy);
  for (int iy = 0; iy < ny; ++iy) {
    double y = map.y_of(iy);
    for (int ix = 0; ix < nx; ++ix) {
      double x = map.x_of(ix);
      double cover = 0.0;
      bool boundary = false;
      for (const auto& h : holes) {
        double ddx = wrap_dx(x - h.x_nm, p.a_nm);
        double d = std::hypot(ddx, y - h.y_nm);
        if (d < h.r_nm - cell_rad) {
          cover = 1.0;
          break;
        }
        if (d < h.r_nm + cell_rad) boundary = true;
      }
      if (cover != 1.0 && boundary)
        cover = cell_coverage(x, y, dx, dy, holes, p.a_nm, std::max(2, supersample));
      map.at(ix, iy) = cover * 1.0 + (1.0 - cover) * eps_slab;
    }
  }
  return map;
}

}  // namespace slf::lattice
