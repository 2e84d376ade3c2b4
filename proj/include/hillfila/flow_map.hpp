#pragma once

// Particle trajectories through a stored velocity history: RK4 through
// time-interpolated Biot-Savart fields, plus the axis-fate classification
// (tail escape / infiltration from the interior / approach from ahead).

#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hillfila/biot_savart.hpp"
#include "hillfila/geometry.hpp"

namespace hillfila {

class VelocityHistory {
 public:
  enum class Interp { piecewise_constant, linear };

  explicit VelocityHistory(Interp interp = Interp::linear) : interp_(interp) {}

  void add(double t, VorticitySource src) {
    if (!snaps_.empty() && !(t > snaps_.back().t))
      throw std::invalid_argument("VelocityHistory: times must be strictly increasing");
    snaps_.push_back({t, std::make_shared<const SourceEvaluator>(src)});
  }

  bool empty() const { return snaps_.empty(); }
  double t_min() const { return snaps_.front().t; }
  double t_max() const { return snaps_.back().t; }

  Vel velocity(double t, const HalfPlanePoint& p) const {
    if (snaps_.empty()) throw std::runtime_error("VelocityHistory: empty");
    if (t < t_min() - 1e-12 || t > t_max() + 1e-12)
      throw std::out_of_range("VelocityHistory: query outside history span");
    if (snaps_.size() == 1) return snaps_[0].eval->velocity(p);
    std::size_t k = 0;
    while (k + 2 < snaps_.size() && snaps_[k + 1].t <= t) ++k;
    if (interp_ == Interp::piecewise_constant) {
      if (k + 1 < snaps_.size() && snaps_[k + 1].t <= t) ++k;
      return snaps_[k].eval->velocity(p);
    }
    const double t0 = snaps_[k].t, t1 = snaps_[k + 1].t;
    const double th = std::clamp((t - t0) / (t1 - t0), 0.0, 1.0);
    const Vel a = snaps_[k].eval->velocity(p);
    const Vel b = snaps_[k + 1].eval->velocity(p);
    return {(1.0 - th) * a.ur + th * b.ur, (1.0 - th) * a.uz + th * b.uz};
  }

 private:
  struct Snap {
    double t;
    std::shared_ptr<const SourceEvaluator> eval;
  };
  std::vector<Snap> snaps_;
  Interp interp_;
};

struct PathSample {
  double t;
  HalfPlanePoint x;
};

// RK4 advection of a single seed through the history. Returns the full
// sampled path including both endpoints. The radial coordinate never goes
// negative: transient undershoots reflect and sub-snap values land exactly
// on the axis, which the velocity field leaves invariant.
inline std::vector<PathSample> advect(const VelocityHistory& h, double t0,
                                      const HalfPlanePoint& x0, double t1, double dt,
                                      double r_snap = 1e-12) {
  if (h.empty()) throw std::runtime_error("advect: empty history");
  if (!(dt > 0.0)) throw std::invalid_argument("advect: dt must be positive");
  if (t0 < h.t_min() - 1e-12 || t1 > h.t_max() + 1e-12 || t1 < t0)
    throw std::out_of_range("advect: query outside history span");

  std::vector<PathSample> path;
  HalfPlanePoint x = x0;
  if (x.r < 0.0) x.r = -x.r;
  if (x.r < r_snap) x.r = 0.0;
  path.push_back({t0, x});
  double t = t0;
  while (t < t1 - 1e-12) {
    const double step = std::min(dt, t1 - t);
    const Vel k1 = h.velocity(t, x);
    const HalfPlanePoint p2{x.r + 0.5 * step * k1.ur, x.z + 0.5 * step * k1.uz};
    const Vel k2 = h.velocity(t + 0.5 * step, p2);
    const HalfPlanePoint p3{x.r + 0.5 * step * k2.ur, x.z + 0.5 * step * k2.uz};
    const Vel k3 = h.velocity(t + 0.5 * step, p3);
    const HalfPlanePoint p4{x.r + step * k3.ur, x.z + step * k3.uz};
    const Vel k4 = h.velocity(t + step, p4);
    x.r += step / 6.0 * (k1.ur + 2.0 * (k2.ur + k3.ur) + k4.ur);
    x.z += step / 6.0 * (k1.uz + 2.0 * (k2.uz + k3.uz) + k4.uz);
    if (x.r < 0.0) x.r = -x.r;
    if (x.r < r_snap) x.r = 0.0;
    t += step;
    path.push_back({t, x});
  }
  return path;
}

enum class AxisFate { Tail, InteriorToFront, AheadToFront };

inline const char* to_string(AxisFate f) {
  switch (f) {
    case AxisFate::Tail: return "Tail";
    case AxisFate::InteriorToFront: return "Interior-to-Front";
    case AxisFate::AheadToFront: return "Ahead-to-Front";
  }
  return "?";
}

namespace detail {

inline double interp_series(const std::vector<std::pair<double, double>>& s, double t) {
  if (s.empty()) throw std::invalid_argument("empty series");
  if (t <= s.front().first) return s.front().second;
  if (t >= s.back().first) return s.back().second;
  std::size_t k = 0;
  while (k + 2 < s.size() && s[k + 1].first <= t) ++k;
  const double th = (t - s[k].first) / (s[k + 1].first - s[k].first);
  return (1.0 - th) * s[k].second + th * s[k + 1].second;
}

}  // namespace detail

// Classify an on-axis trajectory by the gap g(t) = phi^z(t) - tau(t):
//   Tail             g starts below -1 and keeps falling;
//   InteriorToFront  g starts in (-1, 1), rises, and enters the front band
//                    [1 - margin, 1 + margin];
//   AheadToFront     g starts above 1 and settles into the band from above.
// The margin stands in for the front-band width the stability analysis
// leaves as an unspecified constant times sqrt(epsilon).
inline AxisFate classify_axis_fate(const std::vector<PathSample>& path,
                                   const std::vector<std::pair<double, double>>& tau_series,
                                   double margin = 0.1) {
  if (path.size() < 2) throw std::invalid_argument("classify_axis_fate: path too short");
  for (const auto& s : path)
    if (s.x.r != 0.0) throw std::invalid_argument("classify_axis_fate: off-axis path");

  std::vector<double> g(path.size());
  for (std::size_t i = 0; i < path.size(); ++i)
    g[i] = path[i].x.z - detail::interp_series(tau_series, path[i].t);

  const double g0 = g.front();
  const double gE = g.back();
  const bool entered_band = [&] {
    for (double v : g)
      if (std::abs(v - 1.0) <= margin) return true;
    return false;
  }();

  if (g0 < -1.0 && gE < g0) return AxisFate::Tail;
  if (g0 > -1.0 && g0 < 1.0 && gE > g0 && entered_band) return AxisFate::InteriorToFront;
  if (g0 > 1.0 && gE < g0 && entered_band) return AxisFate::AheadToFront;
  throw std::runtime_error("classify_axis_fate: trajectory matches no known pattern");
}

// First time the gap enters the front band, or NaN if it never does.
inline double first_front_entry(const std::vector<PathSample>& path,
                                const std::vector<std::pair<double, double>>& tau_series,
                                double margin = 0.1) {
  for (const auto& s : path) {
    const double g = s.x.z - detail::interp_series(tau_series, s.t);
    if (std::abs(g - 1.0) <= margin) return s.t;
  }
  return std::nan("");
}

}  // namespace hillfila
