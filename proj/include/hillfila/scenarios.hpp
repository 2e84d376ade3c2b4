#pragma once

// Initial-data presets: the exact vortex patch, spheroidal perturbations,
// a patch seeded with a protruding axis segment (the tail-forming data), a
// mollified smooth vortex, and the front-peak data that drives vorticity
// growth. Every preset keeps its support inside the ball of radius
// 1 + delta_prime.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hillfila/evolution.hpp"
#include "hillfila/geometry.hpp"

namespace hillfila {

enum class ScenarioKind { hill, prolate, oblate, seeded_segment, front_peak, smooth_hill };

inline const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::hill: return "hill";
    case ScenarioKind::prolate: return "prolate";
    case ScenarioKind::oblate: return "oblate";
    case ScenarioKind::seeded_segment: return "seeded-segment";
    case ScenarioKind::front_peak: return "front-peak";
    case ScenarioKind::smooth_hill: return "smooth-hill";
  }
  return "?";
}

inline ScenarioKind scenario_from_string(const std::string& s) {
  if (s == "hill") return ScenarioKind::hill;
  if (s == "prolate") return ScenarioKind::prolate;
  if (s == "oblate") return ScenarioKind::oblate;
  if (s == "seeded-segment") return ScenarioKind::seeded_segment;
  if (s == "front-peak") return ScenarioKind::front_peak;
  if (s == "smooth-hill") return ScenarioKind::smooth_hill;
  throw std::invalid_argument("unknown scenario: " + s);
}

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::hill;

  // shape parameters
  double a = 0.9;             // spheroid semi-axis in r
  double b = 0.0;             // spheroid semi-axis in z; 0 derives from volume matching
  bool match_volume = true;   // enforce a^2 b = 1
  double delta_prime = 0.2;   // support margin: supp(xi_0) inside B(1 + delta_prime)
  double m_peak = 20.0;       // front-peak height
  double r0 = 0.05;           // front-peak radial offset
  double sigma = 0.05;        // mollification width / peak radius
  bool seed_tail = false;     // smooth-hill: mollify the seeded-segment region instead

  // numerics
  double dt = 0.02;
  double t_end = 10.0;
  double h_min = 0.0125;
  double h_max = 0.05;
  double curvature_budget = 0.4;
  double h_quad = 1.0 / 128.0;
  double blob_spacing = 0.025;
  double r_axis_snap = 1e-12;
  bool frozen_stage_masks = false;

  // output
  std::string out_dir = "out";
  int snapshot_every = 25;
  int observe_every = 25;
};

namespace detail {

// C-infinity transition, 0 for u <= 0 and 1 for u >= 1.
inline double smoothstep_cinf(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

// C-infinity bump with unit height at s = 0 and support |s| < 1.
inline double bump_cinf(double s) {
  const double s2 = s * s;
  if (s2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s2));
}

// Radial profile of the seeded-segment region: the unit sphere with a smooth
// radial bulge at the back pole reaching |x| = 1 + delta'/2, so the region
// contains the axis segment down to z = -1 - delta'/2 and stays inside
// B(1 + delta').
inline double seeded_profile(double theta, double delta_prime) {
  const double w = 0.6;
  const double d = (pi - theta) / w;
  return 1.0 + 0.5 * delta_prime * std::exp(-d * d);
}

inline Contour spheroid_contour(double a, double b, double spacing) {
  std::vector<HalfPlanePoint> nodes;
  const int na = std::max(8, static_cast<int>(std::ceil(pi * std::max(a, b) / spacing)));
  for (int k = 0; k <= na; ++k) {
    const double th = pi * k / na;
    nodes.push_back({a * std::sin(th), -b * std::cos(th)});
  }
  const int nz = std::max(2, static_cast<int>(std::ceil(2.0 * b / spacing)));
  for (int k = 1; k < nz; ++k) nodes.push_back({0.0, b - 2.0 * b * k / nz});
  Contour c = make_closed_contour(std::move(nodes));
  snap_axis(c, 1e-12);
  return c;
}

inline Contour seeded_contour(double delta_prime, double spacing) {
  std::vector<HalfPlanePoint> nodes;
  const double rmax = 1.0 + 0.5 * delta_prime;
  const int na = std::max(16, static_cast<int>(std::ceil(pi * rmax / spacing)));
  for (int k = 0; k <= na; ++k) {
    const double th = pi * k / na;  // 0 at the front pole (+z)
    const double rho = seeded_profile(th, delta_prime);
    nodes.push_back({rho * std::sin(th), rho * std::cos(th)});
  }
  // axis run from the back pole up to the front pole
  const double z_back = -seeded_profile(pi, delta_prime);
  const double z_front = seeded_profile(0.0, delta_prime);
  const int nz = std::max(2, static_cast<int>(std::ceil((z_front - z_back) / spacing)));
  for (int k = 1; k < nz; ++k)
    nodes.push_back({0.0, z_back + (z_front - z_back) * k / nz});
  Contour c = make_closed_contour(std::move(nodes));
  snap_axis(c, 1e-12);
  return c;
}

// Seed blobs on a uniform grid from an analytic field. The grid passes
// exactly through `anchor`, so a feature centered there is sampled at its
// peak value.
template <class Field>
std::vector<BlobParticle> seed_blobs(const Field& xi, double h, double r_max, double z_min,
                                     double z_max, HalfPlanePoint anchor) {
  std::vector<BlobParticle> blobs;
  const long i_lo = static_cast<long>(std::ceil((1e-12 - anchor.r) / h));
  const long i_hi = static_cast<long>(std::floor((r_max - anchor.r) / h));
  const long j_lo = static_cast<long>(std::ceil((z_min - anchor.z) / h));
  const long j_hi = static_cast<long>(std::floor((z_max - anchor.z) / h));
  for (long j = j_lo; j <= j_hi; ++j) {
    for (long i = i_lo; i <= i_hi; ++i) {
      const HalfPlanePoint p{anchor.r + i * h, anchor.z + j * h};
      if (p.r <= 0.0) continue;
      const double v = xi(p);
      if (v > 1e-12)
        blobs.push_back({p, v, 2.0 * pi * p.r * h * h});
    }
  }
  return blobs;
}

}  // namespace detail

// Build the initial state for a scenario. Patch scenarios return PatchState,
// smooth ones BlobState with core radius twice the particle spacing.
inline SimState make_scenario(const ScenarioConfig& cfg) {
  const double spacing = 0.75 * cfg.h_max;
  switch (cfg.scenario) {
    case ScenarioKind::hill: {
      PatchState s;
      s.contours = {polygonize_half_disk(1.0, 0.0, spacing)};
      return s;
    }
    case ScenarioKind::prolate:
    case ScenarioKind::oblate: {
      double a = cfg.a;
      double b = cfg.b;
      if (b <= 0.0) {
        if (!cfg.match_volume)
          throw std::invalid_argument("spheroid: provide b or enable match_volume");
        b = 1.0 / (a * a);
      }
      if (cfg.scenario == ScenarioKind::prolate && !(a < b))
        throw std::invalid_argument("prolate spheroid requires a < b");
      if (cfg.scenario == ScenarioKind::oblate && !(a > b))
        throw std::invalid_argument("oblate spheroid requires a > b");
      if (std::max(a, b) > 1.0 + cfg.delta_prime)
        throw std::invalid_argument("spheroid leaves B(1 + delta')");
      PatchState s;
      s.contours = {detail::spheroid_contour(a, b, spacing)};
      return s;
    }
    case ScenarioKind::seeded_segment: {
      if (!(cfg.delta_prime > 0.0)) throw std::invalid_argument("seeded-segment: delta' must be positive");
      PatchState s;
      s.contours = {detail::seeded_contour(cfg.delta_prime, spacing)};
      return s;
    }
    case ScenarioKind::smooth_hill: {
      if (!(cfg.sigma > 0.0)) throw std::invalid_argument("smooth-hill: sigma must be positive");
      const double dp = cfg.delta_prime;
      auto field = [&](const HalfPlanePoint& p) {
        const double R = std::hypot(p.r, p.z);
        if (!cfg.seed_tail) return detail::smoothstep_cinf((1.0 - R) / cfg.sigma);
        const double th = std::atan2(p.r, p.z);
        const double rho = detail::seeded_profile(th, dp);
        return detail::smoothstep_cinf((rho - R) / cfg.sigma);
      };
      const double ext = 1.0 + 0.5 * dp + cfg.sigma;
      BlobState s;
      s.blobs = detail::seed_blobs(field, cfg.blob_spacing, ext, -ext, ext,
                                   {0.5 * cfg.blob_spacing, 0.0});
      s.core_radius = 2.0 * cfg.blob_spacing;
      return s;
    }
    case ScenarioKind::front_peak: {
      if (!(cfg.sigma > 0.0) || !(cfg.r0 > 0.0) || !(cfg.m_peak > 0.0))
        throw std::invalid_argument("front-peak: sigma, r0, m_peak must be positive");
      const HalfPlanePoint peak{cfg.r0, 1.0 - cfg.sigma};
      if (std::hypot(peak.r, peak.z) + cfg.sigma > 1.0 + cfg.delta_prime)
        throw std::invalid_argument("front-peak leaves B(1 + delta')");
      auto field = [&](const HalfPlanePoint& p) {
        const double R = std::hypot(p.r, p.z);
        const double background = detail::smoothstep_cinf((1.0 - R) / cfg.sigma);
        const double s = std::hypot(p.r - peak.r, p.z - peak.z) / cfg.sigma;
        return background + cfg.m_peak * detail::bump_cinf(s);
      };
      const double ext = 1.0 + cfg.delta_prime;
      BlobState s;
      s.blobs = detail::seed_blobs(field, cfg.blob_spacing, ext, -ext, ext, peak);
      s.core_radius = 2.0 * cfg.blob_spacing;
      return s;
    }
  }
  throw std::logic_error("unreachable scenario kind");
}

}  // namespace hillfila
