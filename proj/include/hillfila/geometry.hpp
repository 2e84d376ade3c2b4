#pragma once

// Meridional half-plane geometry for axisymmetric (swirl-free) flows.
// Everything lives in the (r, z) cross-section with r >= 0; the azimuthal
// angle is never stored.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hillfila {

inline constexpr double pi = 3.14159265358979323846;

struct HalfPlanePoint {
  double r = 0.0;  // radial coordinate, >= 0 for stored geometry
  double z = 0.0;  // axial coordinate
};

struct Vel {
  double ur = 0.0;
  double uz = 0.0;
};

inline double dist(const HalfPlanePoint& a, const HalfPlanePoint& b) {
  return std::hypot(a.r - b.r, a.z - b.z);
}

// 3D distance between the circles swept by two half-plane points.
// The farthest pair of points on the two circles sits at opposite azimuths,
// giving sqrt((r1 + r2)^2 + (z1 - z2)^2).
inline double revolved_dist(const HalfPlanePoint& a, const HalfPlanePoint& b) {
  return std::hypot(a.r + b.r, a.z - b.z);
}

// Polyline/polygon in the half-plane. Closed contours are patch cross-section
// boundaries; constructors normalize orientation so the enclosed region lies
// on the left (positive signed area in the (r, z) plane).
struct Contour {
  std::vector<HalfPlanePoint> nodes;
  bool closed = true;
};

// Signed area of the closed polygon, positive for counterclockwise traversal
// in the (r, z) plane.
inline double signed_area(const Contour& c) {
  if (!c.closed || c.nodes.size() < 3) return 0.0;
  double a = 0.0;
  const std::size_t n = c.nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = c.nodes[i];
    const auto& q = c.nodes[(i + 1) % n];
    a += p.r * q.z - q.r * p.z;
  }
  return 0.5 * a;
}

inline Contour make_closed_contour(std::vector<HalfPlanePoint> nodes) {
  Contour c{std::move(nodes), true};
  if (signed_area(c) < 0.0) std::reverse(c.nodes.begin(), c.nodes.end());
  return c;
}

inline Contour make_open_contour(std::vector<HalfPlanePoint> nodes) {
  return Contour{std::move(nodes), false};
}

// Snap nodes onto the symmetry axis and reflect any negative r back into the
// half-plane. The axis is invariant for the continuum flow; discrete drift
// below r_snap is treated as exactly zero.
inline void snap_axis(Contour& c, double r_snap) {
  for (auto& p : c.nodes) {
    if (p.r < 0.0) p.r = -p.r;
    if (p.r < r_snap) p.r = 0.0;
  }
}

struct BoundingBox {
  double r_min = 0.0, r_max = 0.0, z_min = 0.0, z_max = 0.0;
};

inline BoundingBox bounding_box(const Contour& c) {
  if (c.nodes.empty()) throw std::invalid_argument("empty geometry");
  BoundingBox b{c.nodes[0].r, c.nodes[0].r, c.nodes[0].z, c.nodes[0].z};
  for (const auto& p : c.nodes) {
    b.r_min = std::min(b.r_min, p.r);
    b.r_max = std::max(b.r_max, p.r);
    b.z_min = std::min(b.z_min, p.z);
    b.z_max = std::max(b.z_max, p.z);
  }
  return b;
}

inline BoundingBox bounding_box(const std::vector<Contour>& cs) {
  if (cs.empty()) throw std::invalid_argument("empty geometry");
  BoundingBox b = bounding_box(cs.front());
  for (const auto& c : cs) {
    BoundingBox bc = bounding_box(c);
    b.r_min = std::min(b.r_min, bc.r_min);
    b.r_max = std::max(b.r_max, bc.r_max);
    b.z_min = std::min(b.z_min, bc.z_min);
    b.z_max = std::max(b.z_max, bc.z_max);
  }
  return b;
}

// Diameter of the solid of revolution. Attained on the boundary, so the
// maximum over node pairs suffices; O(N^2) is fine at the node counts used.
inline double revolved_diameter(const Contour& c) {
  if (c.nodes.empty()) throw std::invalid_argument("empty geometry");
  double d = 0.0;
  for (std::size_t i = 0; i < c.nodes.size(); ++i)
    for (std::size_t j = i; j < c.nodes.size(); ++j)
      d = std::max(d, revolved_dist(c.nodes[i], c.nodes[j]));
  return d;
}

inline double revolved_diameter(const std::vector<Contour>& cs) {
  if (cs.empty()) throw std::invalid_argument("empty geometry");
  double d = 0.0;
  for (const auto& a : cs)
    for (const auto& b : cs)
      for (const auto& p : a.nodes)
        for (const auto& q : b.nodes) d = std::max(d, revolved_dist(p, q));
  return d;
}

// Cross-section perimeter (sum of segment lengths, closing segment included
// for closed contours).
inline double arc_length(const Contour& c) {
  if (c.nodes.size() < 2) throw std::invalid_argument("arc_length: need at least 2 nodes");
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i) s += dist(c.nodes[i], c.nodes[i + 1]);
  if (c.closed) s += dist(c.nodes.back(), c.nodes.front());
  return s;
}

// Exact polygon moments over the enclosed cross-section via Green's theorem:
// integral of r^k dr dz = closed integral of r^(k+1)/(k+1) dz.
// Positive orientation assumed (constructors normalize).
inline double polygon_moment_rk(const Contour& c, int k) {
  if (!c.closed) throw std::invalid_argument("moment of an open contour");
  const std::size_t n = c.nodes.size();
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = c.nodes[i];
    const auto& q = c.nodes[(i + 1) % n];
    const double dz = q.z - p.z;
    double seg = 0.0;
    switch (k) {
      case 0: seg = 0.5 * (p.r + q.r); break;
      case 1: seg = (p.r * p.r + p.r * q.r + q.r * q.r) / 6.0; break;
      case 3: {
        const double a = p.r, b = q.r;
        seg = (a * a * a * a + a * a * a * b + a * a * b * b + a * b * b * b + b * b * b * b) / 20.0;
        break;
      }
      default: throw std::invalid_argument("unsupported moment order");
    }
    m += seg * dz;
  }
  return m;
}

// Volume of the solid of revolution, 2 pi * integral of r over the enclosed
// cross-section (Pappus).
inline double revolved_volume(const Contour& c) {
  if (!c.closed) throw std::invalid_argument("revolved_volume: open contour");
  return 2.0 * pi * polygon_moment_rk(c, 1);
}

inline double revolved_volume(const std::vector<Contour>& cs) {
  double v = 0.0;
  for (const auto& c : cs) v += revolved_volume(c);
  return v;
}

// Even-odd point-in-polygon test. The value exactly on the boundary is
// unspecified.
inline bool contains(const Contour& c, const HalfPlanePoint& p) {
  if (!c.closed) throw std::invalid_argument("contains: open contour");
  bool inside = false;
  const std::size_t n = c.nodes.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& a = c.nodes[j];
    const auto& b = c.nodes[i];
    if ((b.z > p.z) != (a.z > p.z)) {
      const double rx = b.r + (p.z - b.z) * (a.r - b.r) / (a.z - b.z);
      if (p.r < rx) inside = !inside;
    }
  }
  return inside;
}

inline bool contains(const std::vector<Contour>& cs, const HalfPlanePoint& p) {
  bool inside = false;
  for (const auto& c : cs) inside ^= contains(c, p);
  return inside;
}

// Distance from a point to a segment.
inline double point_segment_dist(const HalfPlanePoint& p, const HalfPlanePoint& a,
                                 const HalfPlanePoint& b) {
  const double vr = b.r - a.r, vz = b.z - a.z;
  const double wr = p.r - a.r, wz = p.z - a.z;
  const double vv = vr * vr + vz * vz;
  double t = vv > 0.0 ? (wr * vr + wz * vz) / vv : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(wr - t * vr, wz - t * vz);
}

// Unsigned distance from a point to the contour polyline.
inline double boundary_distance(const Contour& c, const HalfPlanePoint& p) {
  const std::size_t n = c.nodes.size();
  if (n == 0) throw std::invalid_argument("empty geometry");
  double d = std::numeric_limits<double>::infinity();
  const std::size_t m = c.closed ? n : n - 1;
  for (std::size_t i = 0; i < m; ++i)
    d = std::min(d, point_segment_dist(p, c.nodes[i], c.nodes[(i + 1) % n]));
  return d;
}

// Signed distance, positive inside (even-odd rule).
inline double signed_distance(const Contour& c, const HalfPlanePoint& p) {
  const double d = boundary_distance(c, p);
  return contains(c, p) ? d : -d;
}

namespace detail {

// Curvature estimate from the circumscribed circle of a node triple:
// kappa = 4 * area(abc) / (|ab| |bc| |ca|). Collinear triples give 0.
inline double triple_curvature(const HalfPlanePoint& a, const HalfPlanePoint& b,
                               const HalfPlanePoint& c) {
  const double abr = b.r - a.r, abz = b.z - a.z;
  const double acr = c.r - a.r, acz = c.z - a.z;
  const double cross = abr * acz - abz * acr;
  const double lab = std::hypot(abr, abz);
  const double lbc = dist(b, c);
  const double lca = dist(c, a);
  const double denom = lab * lbc * lca;
  if (denom <= 0.0) return 0.0;
  return 2.0 * std::abs(cross) / denom;
}

// Midpoint of the circular arc through (a, b, c) between a and b. Falls back
// to the chord midpoint for (near-)collinear triples.
inline HalfPlanePoint arc_midpoint(const HalfPlanePoint& a, const HalfPlanePoint& b,
                                   const HalfPlanePoint& c) {
  const HalfPlanePoint chord{0.5 * (a.r + b.r), 0.5 * (a.z + b.z)};
  const double x1 = a.r, y1 = a.z, x2 = b.r, y2 = b.z, x3 = c.r, y3 = c.z;
  const double d = 2.0 * (x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2));
  const double scale = dist(a, b) + dist(b, c);
  if (std::abs(d) < 1e-12 * scale * scale) return chord;
  const double s1 = x1 * x1 + y1 * y1, s2 = x2 * x2 + y2 * y2, s3 = x3 * x3 + y3 * y3;
  const double ux = (s1 * (y2 - y3) + s2 * (y3 - y1) + s3 * (y1 - y2)) / d;
  const double uy = (s1 * (x3 - x2) + s2 * (x1 - x3) + s3 * (x2 - x1)) / d;
  const double rad = std::hypot(x1 - ux, y1 - uy);
  const double mr = chord.r - ux, mz = chord.z - uy;
  const double lm = std::hypot(mr, mz);
  if (lm < 1e-14 * rad) return chord;  // diametral chord, ambiguous side
  return HalfPlanePoint{ux + rad * mr / lm, uy + rad * mz / lm};
}

inline bool on_axis(const HalfPlanePoint& p) { return p.r == 0.0; }

// Orientation of the triple (a,b,c): >0 counterclockwise.
inline double orient(const HalfPlanePoint& a, const HalfPlanePoint& b, const HalfPlanePoint& c) {
  return (b.r - a.r) * (c.z - a.z) - (b.z - a.z) * (c.r - a.r);
}

inline bool segments_intersect(const HalfPlanePoint& a, const HalfPlanePoint& b,
                               const HalfPlanePoint& c, const HalfPlanePoint& d) {
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  auto on_seg = [](const HalfPlanePoint& p, const HalfPlanePoint& q, const HalfPlanePoint& s) {
    return std::min(p.r, q.r) <= s.r && s.r <= std::max(p.r, q.r) && std::min(p.z, q.z) <= s.z &&
           s.z <= std::max(p.z, q.z);
  };
  if (d1 == 0 && on_seg(c, d, a)) return true;
  if (d2 == 0 && on_seg(c, d, b)) return true;
  if (d3 == 0 && on_seg(a, b, c)) return true;
  if (d4 == 0 && on_seg(a, b, d)) return true;
  return false;
}

}  // namespace detail

// Self-intersection test for a closed polygon: sweep over segments sorted by
// their lower z, testing only z-overlapping pairs. Adjacent segments (sharing
// a node) are skipped.
inline bool self_intersects(const Contour& c) {
  const std::size_t n = c.nodes.size();
  if (n < 4) return false;
  struct Seg {
    std::size_t i;
    double zlo, zhi;
  };
  std::vector<Seg> segs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = c.nodes[i];
    const auto& b = c.nodes[(i + 1) % n];
    segs[i] = {i, std::min(a.z, b.z), std::max(a.z, b.z)};
  }
  std::sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) { return a.zlo < b.zlo; });
  std::vector<const Seg*> active;
  for (const auto& s : segs) {
    std::erase_if(active, [&](const Seg* t) { return t->zhi < s.zlo; });
    for (const Seg* t : active) {
      const std::size_t i = s.i, j = t->i;
      const std::size_t d = (i > j ? i - j : j - i);
      if (d == 1 || d == n - 1) continue;  // adjacent
      if (detail::segments_intersect(c.nodes[i], c.nodes[(i + 1) % n], c.nodes[j],
                                     c.nodes[(j + 1) % n]))
        return true;
    }
    active.push_back(&s);
  }
  return false;
}

// Adaptive node insertion/removal on a polyline. Splits segments longer than
// h_max or with spacing * curvature above the budget; merges segments shorter
// than h_min when the merged spacing stays conforming. Inserted nodes are
// lifted onto the local circular arc so resampling a circle reproduces the
// circle; axis segments stay exactly on the axis.
inline Contour remesh(const Contour& c, double h_min, double h_max, double curvature_budget) {
  if (!(h_min > 0.0) || !(h_max > 0.0) || !(curvature_budget > 0.0) || h_min >= h_max)
    throw std::invalid_argument("remesh: need 0 < h_min < h_max and positive curvature budget");
  if (c.nodes.size() < 2) throw std::invalid_argument("remesh: need at least 2 nodes");

  std::vector<HalfPlanePoint> pts = c.nodes;
  const bool closed = c.closed;

  auto node_at = [&](std::ptrdiff_t i) -> const HalfPlanePoint& {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(pts.size());
    if (closed) return pts[static_cast<std::size_t>(((i % n) + n) % n)];
    return pts[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, n - 1))];
  };

  auto curvature_at = [&](std::ptrdiff_t i) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(pts.size());
    if (!closed && (i <= 0 || i >= n - 1)) return 0.0;
    return detail::triple_curvature(node_at(i - 1), node_at(i), node_at(i + 1));
  };

  // Removal pass: drop a node when its left segment is shorter than h_min and
  // the merged segment still conforms.
  bool changed = true;
  int guard = 0;
  while (changed && ++guard < 64) {
    changed = false;
    const std::size_t n = pts.size();
    if (n <= (closed ? 4u : 2u)) break;
    std::vector<HalfPlanePoint> out;
    out.reserve(n);
    std::vector<bool> keep(n, true);
    for (std::size_t i = 0; i < n; ++i) {
      if (!closed && (i == 0 || i == n - 1)) continue;  // endpoints preserved
      if (!keep[i]) continue;
      const std::size_t prev = (i + n - 1) % n;
      const std::size_t next = (i + 1) % n;
      if (!keep[prev] || (!closed && i == 1 && !keep[0])) continue;
      const double left = dist(pts[prev], pts[i]);
      if (left >= h_min) continue;
      const double merged = dist(pts[prev], pts[next]);
      const double kappa = std::max(curvature_at(static_cast<std::ptrdiff_t>(prev)),
                                    curvature_at(static_cast<std::ptrdiff_t>(next)));
      if (merged <= h_max && merged * kappa <= curvature_budget) {
        keep[i] = false;
        changed = true;
      }
    }
    if (changed) {
      for (std::size_t i = 0; i < n; ++i)
        if (keep[i]) out.push_back(pts[i]);
      pts.swap(out);
    }
  }

  // Insertion passes: split offending segments at the local arc midpoint.
  guard = 0;
  changed = true;
  while (changed && ++guard < 32) {
    changed = false;
    const std::size_t n = pts.size();
    const std::size_t nseg = closed ? n : n - 1;
    std::vector<HalfPlanePoint> out;
    out.reserve(2 * n);
    for (std::size_t i = 0; i < nseg; ++i) {
      const HalfPlanePoint& a = pts[i];
      const HalfPlanePoint& b = pts[(i + 1) % n];
      out.push_back(a);
      const double h = dist(a, b);
      const double kappa =
          std::max(curvature_at(static_cast<std::ptrdiff_t>(i)),
                   curvature_at(static_cast<std::ptrdiff_t>((i + 1) % n)));
      const bool split = (h > h_max) || (h * kappa > curvature_budget && h > 2.0 * h_min);
      if (!split) continue;
      HalfPlanePoint mid;
      if (detail::on_axis(a) && detail::on_axis(b)) {
        mid = HalfPlanePoint{0.0, 0.5 * (a.z + b.z)};
      } else {
        const HalfPlanePoint m1 = detail::arc_midpoint(a, b, node_at(static_cast<std::ptrdiff_t>(i) - 1));
        const HalfPlanePoint m2 = detail::arc_midpoint(a, b, node_at(static_cast<std::ptrdiff_t>(i) + 2));
        mid = HalfPlanePoint{0.5 * (m1.r + m2.r), 0.5 * (m1.z + m2.z)};
        if (mid.r < 0.0) mid.r = 0.0;
      }
      out.push_back(mid);
      changed = true;
    }
    if (!closed) out.push_back(pts.back());
    pts.swap(out);
  }

  Contour result{std::move(pts), closed};
  return result;
}

// Polygonize the half-disk cross-section of an axis ball: a semicircular arc
// from the back pole to the front pole closed by a run of nodes along the
// axis. Node spacing is approximately `spacing` on both parts.
inline Contour polygonize_half_disk(double radius, double center_z, double spacing) {
  if (!(radius > 0.0) || !(spacing > 0.0))
    throw std::invalid_argument("polygonize_half_disk: radius and spacing must be positive");
  std::vector<HalfPlanePoint> nodes;
  const int na = std::max(8, static_cast<int>(std::ceil(pi * radius / spacing)));
  for (int k = 0; k <= na; ++k) {
    const double th = pi * k / na;  // th = 0 at the back pole
    nodes.push_back({radius * std::sin(th), center_z - radius * std::cos(th)});
  }
  const int nz = std::max(2, static_cast<int>(std::ceil(2.0 * radius / spacing)));
  for (int k = 1; k < nz; ++k)
    nodes.push_back({0.0, center_z + radius - 2.0 * radius * k / nz});
  Contour c = make_closed_contour(std::move(nodes));
  snap_axis(c, 1e-12);
  return c;
}

// Axisymmetric ball |x - center_z e_z| < radius; the cross-section is the
// half-disk {r^2 + (z - center_z)^2 < radius^2, r >= 0}.
struct AxiBall {
  double center_z = 0.0;
  double radius = 1.0;

  bool contains(const HalfPlanePoint& p) const {
    const double dz = p.z - center_z;
    return p.r * p.r + dz * dz < radius * radius;
  }
  double signed_distance(const HalfPlanePoint& p) const {
    const double dz = p.z - center_z;
    return radius - std::hypot(p.r, dz);  // positive inside
  }
};

// Spherical shell S^{tau,lambda} = {1-lambda <= |x - tau e_z| <= 1+lambda}.
inline bool in_shell(double tau, double lambda, const HalfPlanePoint& p) {
  const double d = std::hypot(p.r, p.z - tau);
  return 1.0 - lambda <= d && d <= 1.0 + lambda;
}

// Front cap E^{tau,lambda} = S^{tau,lambda} intersected with {r <= 1/10, z >= tau}.
inline bool in_front_cap(double tau, double lambda, const HalfPlanePoint& p) {
  return in_shell(tau, lambda, p) && p.r <= 0.1 && p.z >= tau;
}

// Front cylinder {1-a <= z - tau <= 1+a, 0 <= r <= 1/10} on which the radial
// velocity of the unperturbed vortex is comparable to W r.
inline bool in_front_cylinder(double tau, double a, const HalfPlanePoint& p) {
  return p.z - tau >= 1.0 - a && p.z - tau <= 1.0 + a && p.r >= 0.0 && p.r <= 0.1;
}

}  // namespace hillfila
