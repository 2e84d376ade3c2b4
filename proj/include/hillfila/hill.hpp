#pragma once

// Closed forms for Hill's spherical vortex: the relative vorticity is the
// indicator of the unit ball and the vortex translates at speed W = 2/15.
// These serve as the exact oracle for the numerical Biot-Savart evaluator
// and the time steppers.

#include <cmath>
#include <stdexcept>

#include "hillfila/geometry.hpp"
#include "hillfila/integrate.hpp"

namespace hillfila {

struct HillConstants {
  double W = 2.0 / 15.0;   // traveling speed of the unit-strength vortex
  double strength = 1.0;   // relative vorticity inside the unit ball
};

// Relative vorticity: 1 inside the unit ball, 0 outside. The value exactly
// on |x| = 1 is a measure-zero convention; this implementation returns 0
// there, but callers must not rely on it.
inline double hill_xi(const HalfPlanePoint& p, const HillConstants& hc = {}) {
  return (p.r * p.r + p.z * p.z < 1.0) ? hc.strength : 0.0;
}

// Stokes stream function of the vortex:
//   inside:  (1/2) W r^2 (5/2 - 3/2 |x|^2)
//   outside: (1/2) W r^2 / |x|^3
// Continuous across |x| = 1; points exactly on the sphere take the interior
// branch (the branches agree there).
inline double hill_stream(const HalfPlanePoint& p, const HillConstants& hc = {}) {
  const double W = hc.W * hc.strength;
  const double r2 = p.r * p.r;
  const double s2 = r2 + p.z * p.z;
  if (s2 <= 1.0) return 0.5 * W * r2 * (2.5 - 1.5 * s2);
  return 0.5 * W * r2 / (s2 * std::sqrt(s2));
}

// Velocity field (u_r, u_z):
//   inside:  u_r = (3/2) W r z,           u_z = (W/2)(5 - 3|x|^2 - 3 r^2)
//   outside: u_r = (3/2) W r z / |x|^5,   u_z = (W/|x|^3)(1 - 3 r^2 / (2|x|^2))
inline Vel hill_velocity(const HalfPlanePoint& p, const HillConstants& hc = {}) {
  const double W = hc.W * hc.strength;
  const double r2 = p.r * p.r;
  const double s2 = r2 + p.z * p.z;
  if (s2 <= 1.0)
    return {1.5 * W * p.r * p.z, 0.5 * W * (5.0 - 3.0 * s2 - 3.0 * r2)};
  const double s3 = s2 * std::sqrt(s2);
  return {1.5 * W * p.r * p.z / (s3 * s2), (W / s3) * (1.0 - 1.5 * r2 / s2)};
}

// Stream function of the co-moving flow (frame translating at W e_z); the
// unit sphere and the axis are its zero level set (the separatrix).
inline double comoving_stream(const HalfPlanePoint& p, const HillConstants& hc = {}) {
  const double W = hc.W * hc.strength;
  const double r2 = p.r * p.r;
  const double s2 = r2 + p.z * p.z;
  if (s2 <= 1.0) return 0.5 * W * r2 * 1.5 * (1.0 - s2);
  return 0.5 * W * r2 * (1.0 / (s2 * std::sqrt(s2)) - 1.0);
}

// Co-moving axial velocity on the symmetry axis:
//   |z| <= 1: (3W/2)(1 - z^2),   |z| > 1: (W/|z|^3)(1 - |z|^3)
inline double axis_velocity(double z, const HillConstants& hc = {}) {
  const double W = hc.W * hc.strength;
  const double az = std::abs(z);
  if (az <= 1.0) return 1.5 * W * (1.0 - z * z);
  const double az3 = az * az * az;
  return (W / az3) * (1.0 - az3);
}

// Closed-form axis trajectory for |z0| < 1 in the co-moving frame:
//   z(t) = (e^{3Wt} - e^{2c}) / (e^{3Wt} + e^{2c}),
//   c = (1/2) log((1 - z0)/(1 + z0)).
// Monotonically increasing toward the front stagnation point z = 1.
inline double axis_trajectory_interior(double z0, double t, const HillConstants& hc = {}) {
  if (!(std::abs(z0) < 1.0)) throw std::invalid_argument("axis_trajectory_interior: outside interior case");
  const double W = hc.W * hc.strength;
  // tanh form of the stated quotient, stable for large t
  const double c = 0.5 * std::log((1.0 - z0) / (1.0 + z0));
  return std::tanh(1.5 * W * t - c);
}

// Axis trajectory for |z0| > 1, integrated adaptively (no closed form).
// Strictly decreasing; z0 > 1 relaxes onto z = 1, z0 < -1 escapes backward
// asymptotically linearly at rate W.
inline double axis_trajectory_exterior(double z0, double t, const HillConstants& hc = {}) {
  if (!(std::abs(z0) > 1.0)) throw std::invalid_argument("axis_trajectory_exterior: outside exterior case");
  if (t == 0.0) return z0;
  return integrate_adaptive_rk4([&](double z) { return axis_velocity(z, hc); }, z0, 0.0, t,
                                1e-10);
}

// L^1 distance between the vortex and its z-translate by tau,
// f(tau) = |B symmetric-difference B^tau|:
//   |tau| <= 2: (pi/6)|tau|(12 - tau^2),   |tau| > 2: 8 pi / 3.
inline double overlap_f(double tau) {
  const double a = std::abs(tau);
  if (a >= 2.0) return 8.0 * pi / 3.0;
  return pi / 6.0 * a * (12.0 - a * a);
}

}  // namespace hillfila
