#pragma once

// Antialiased rasterization of cross-section polygons. Interior cells carry
// coverage 1; cells within one cell size of the boundary get a fractional
// coverage from a linear ramp of the signed distance. The even-odd rule is
// applied across all contours, so disjoint components and holes both work.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "hillfila/geometry.hpp"

namespace hillfila {

struct CoverageGrid {
  double r0 = 0.0;  // cell centers at r0 + (i + 1/2) h
  double z0 = 0.0;  // cell centers at z0 + (j + 1/2) h
  double h = 0.0;
  long nr = 0, nz = 0;
  std::vector<double> cov;            // row-major, index j * nr + i
  std::vector<std::uint8_t> boundary; // coverage came from the distance ramp

  double r_center(long i) const { return r0 + (i + 0.5) * h; }
  double z_center(long j) const { return z0 + (j + 0.5) * h; }
};

inline double polys_signed_distance(const std::vector<Contour>& polys, const HalfPlanePoint& p) {
  bool in = false;
  double bd = std::numeric_limits<double>::infinity();
  for (const auto& poly : polys) {
    in ^= contains(poly, p);
    bd = std::min(bd, boundary_distance(poly, p));
  }
  return in ? bd : -bd;
}

inline double polys_coverage(const std::vector<Contour>& polys, const HalfPlanePoint& p,
                             double size) {
  return std::clamp(0.5 + polys_signed_distance(polys, p) / size, 0.0, 1.0);
}

// Rasterize onto the prescribed grid: scanline even-odd fill for the binary
// interior, then the distance ramp on cells whose 4-neighborhood is mixed.
inline CoverageGrid coverage_grid(const std::vector<Contour>& polys, double r0, double z0,
                                  double h, long nr, long nz) {
  CoverageGrid g;
  g.r0 = r0;
  g.z0 = z0;
  g.h = h;
  g.nr = nr;
  g.nz = nz;
  g.cov.assign(static_cast<std::size_t>(nr * nz), 0.0);
  g.boundary.assign(static_cast<std::size_t>(nr * nz), 0);

  std::vector<std::uint8_t> inside(static_cast<std::size_t>(nr * nz), 0);
  std::vector<double> cross;
  for (long j = 0; j < nz; ++j) {
    const double zc = g.z_center(j);
    cross.clear();
    for (const auto& poly : polys) {
      const std::size_t n = poly.nodes.size();
      for (std::size_t e = 0; e < n; ++e) {
        const auto& a = poly.nodes[e];
        const auto& b = poly.nodes[(e + 1) % n];
        if ((b.z > zc) != (a.z > zc))
          cross.push_back(b.r + (zc - b.z) * (a.r - b.r) / (a.z - b.z));
      }
    }
    std::sort(cross.begin(), cross.end());
    for (std::size_t k = 0; k + 1 < cross.size(); k += 2) {
      long i0 = static_cast<long>(std::ceil((cross[k] - r0) / h - 0.5));
      long i1 = static_cast<long>(std::floor((cross[k + 1] - r0) / h - 0.5));
      i0 = std::max(i0, 0L);
      i1 = std::min(i1, nr - 1);
      for (long i = i0; i <= i1; ++i) inside[static_cast<std::size_t>(j * nr + i)] = 1;
    }
  }

  auto at = [&](long i, long j) -> std::uint8_t {
    if (i < 0 || i >= nr || j < 0 || j >= nz) return 0;
    return inside[static_cast<std::size_t>(j * nr + i)];
  };

  for (long j = 0; j < nz; ++j) {
    for (long i = 0; i < nr; ++i) {
      const std::uint8_t in = at(i, j);
      const bool mixed =
          at(i - 1, j) != in || at(i + 1, j) != in || at(i, j - 1) != in || at(i, j + 1) != in;
      if (!in && !mixed) continue;
      const std::size_t idx = static_cast<std::size_t>(j * nr + i);
      if (!mixed) {
        g.cov[idx] = 1.0;
        continue;
      }
      g.cov[idx] = polys_coverage(polys, {g.r_center(i), g.z_center(j)}, h);
      g.boundary[idx] = 1;
    }
  }
  return g;
}

// Grid hugging the polygons with `pad` cells of margin, cell centers aligned
// to absolute multiples of h (so rigid z-shifts by multiples of h shift the
// raster rigidly).
inline CoverageGrid coverage_grid_aligned(const std::vector<Contour>& polys, double h, long pad = 2) {
  const BoundingBox bb = bounding_box(polys);
  const long iz_lo = static_cast<long>(std::floor(bb.z_min / h)) - pad;
  const long iz_hi = static_cast<long>(std::floor(bb.z_max / h)) + pad;
  const long nr = static_cast<long>(std::floor(bb.r_max / h)) + pad + 1;
  return coverage_grid(polys, 0.0, iz_lo * h, h, nr, iz_hi - iz_lo + 1);
}

}  // namespace hillfila
