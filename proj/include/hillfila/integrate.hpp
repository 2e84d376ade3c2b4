#pragma once

// Small ODE and optimization utilities shared across modules.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace hillfila {

// One classical RK4 step for a scalar autonomous ODE dz/dt = f(z).
template <class F>
double rk4_step_scalar(const F& f, double z, double dt) {
  const double k1 = f(z);
  const double k2 = f(z + 0.5 * dt * k1);
  const double k3 = f(z + 0.5 * dt * k2);
  const double k4 = f(z + dt * k3);
  return z + dt / 6.0 * (k1 + 2.0 * (k2 + k3) + k4);
}

// Adaptive RK4 by step doubling: a full step is compared against two half
// steps and the step size adjusted to keep the per-step error below
// rtol * (|z| + 1). Richardson extrapolation of the two estimates gives the
// accepted value.
template <class F>
double integrate_adaptive_rk4(const F& f, double z0, double t0, double t1, double rtol) {
  if (t1 < t0) throw std::invalid_argument("integrate_adaptive_rk4: t1 < t0");
  double t = t0;
  double z = z0;
  double dt = (t1 - t0) * 0.01 + 1e-12;
  int guard = 0;
  while (t < t1) {
    if (++guard > 2000000) throw std::runtime_error("integrate_adaptive_rk4: too many steps");
    dt = std::min(dt, t1 - t);
    const double full = rk4_step_scalar(f, z, dt);
    const double half = rk4_step_scalar(f, rk4_step_scalar(f, z, 0.5 * dt), 0.5 * dt);
    const double err = std::abs(full - half);
    const double tol = rtol * (std::abs(z) + 1.0);
    if (err <= tol || dt <= 1e-14 * (std::abs(t1) + 1.0)) {
      t += dt;
      z = half + (half - full) / 15.0;
      if (err < 0.1 * tol) dt *= 2.0;
    } else {
      dt *= 0.5;
    }
  }
  return z;
}

// Golden-section minimization of a unimodal function on [a, b] to absolute
// tolerance tol on the argument.
template <class F>
double golden_min(const F& f, double a, double b, double tol) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace hillfila
