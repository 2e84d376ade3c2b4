#pragma once

// Time advance of the transported relative vorticity, either as a vortex
// patch (boundary nodes advected, contour dynamics style) or as Lagrangian
// blobs. Classical fixed-step RK4; the velocity source is rebuilt from the
// staged geometry at every stage unless frozen_stage_masks is set.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hillfila/biot_savart.hpp"
#include "hillfila/geometry.hpp"

namespace hillfila {

struct PatchState {
  double t = 0.0;
  std::vector<Contour> contours;  // cross-section boundary
  double xi_value = 1.0;
};

struct BlobState {
  double t = 0.0;
  std::vector<BlobParticle> blobs;
  double core_radius = 0.0;
  long long reflected = 0;  // blobs reflected off the axis so far
};

using SimState = std::variant<PatchState, BlobState>;

inline double state_time(const SimState& s) {
  return std::visit([](const auto& st) { return st.t; }, s);
}

struct EvolveParams {
  double h_min = 0.0125;
  double h_max = 0.05;
  double curvature_budget = 0.4;
  double h_quad = 1.0 / 128.0;
  double r_axis_snap = 1e-12;
  bool frozen_stage_masks = false;
  std::size_t max_nodes = 40000;
};

// A step whose result violated the simplicity invariant. The suggested dt
// is half the attempted one.
struct StepRejected : std::runtime_error {
  explicit StepRejected(double dt_suggested)
      : std::runtime_error("step rejected: contour self-intersection"), suggested_dt(dt_suggested) {}
  double suggested_dt;
};

namespace detail {

inline HalfPlanePoint reflected(HalfPlanePoint p, double r_snap) {
  if (p.r < 0.0) p.r = -p.r;
  if (p.r < r_snap) p.r = 0.0;
  return p;
}

// Build a patch source from staged node positions (reflected into r >= 0).
inline PatchSource staged_source(const std::vector<Contour>& topology,
                                 const std::vector<HalfPlanePoint>& pos, double xi_value,
                                 double h_quad, double r_snap) {
  PatchSource src;
  src.xi_value = xi_value;
  src.h_quad = h_quad;
  src.contours.reserve(topology.size());
  std::size_t k = 0;
  for (const auto& c : topology) {
    Contour cc;
    cc.closed = c.closed;
    cc.nodes.reserve(c.nodes.size());
    for (std::size_t i = 0; i < c.nodes.size(); ++i) cc.nodes.push_back(reflected(pos[k++], r_snap));
    src.contours.push_back(std::move(cc));
  }
  return src;
}

}  // namespace detail

inline PatchState step_patch(const PatchState& s, double dt, const EvolveParams& prm) {
  if (dt == 0.0) return s;
  if (dt < 0.0) throw std::invalid_argument("step_patch: dt must be positive");

  std::vector<HalfPlanePoint> x0;
  for (const auto& c : s.contours)
    for (const auto& p : c.nodes) x0.push_back(p);
  const std::size_t n = x0.size();

  // Stage 0 source; with frozen_stage_masks it also serves the later stages.
  const SourceEvaluator stage0_eval{VorticitySource{
      detail::staged_source(s.contours, x0, s.xi_value, prm.h_quad, prm.r_axis_snap)}};

  auto eval_velocity = [&](const std::vector<HalfPlanePoint>& pos) -> std::vector<Vel> {
    if (prm.frozen_stage_masks) return velocity_batch(stage0_eval, pos);
    const PatchSource src =
        detail::staged_source(s.contours, pos, s.xi_value, prm.h_quad, prm.r_axis_snap);
    const SourceEvaluator eval{VorticitySource{src}};
    return velocity_batch(eval, pos);
  };

  std::vector<HalfPlanePoint> stage(n);
  const std::vector<Vel> k1 = velocity_batch(stage0_eval, x0);
  for (std::size_t i = 0; i < n; ++i)
    stage[i] = {x0[i].r + 0.5 * dt * k1[i].ur, x0[i].z + 0.5 * dt * k1[i].uz};
  const std::vector<Vel> k2 = eval_velocity(stage);
  for (std::size_t i = 0; i < n; ++i)
    stage[i] = {x0[i].r + 0.5 * dt * k2[i].ur, x0[i].z + 0.5 * dt * k2[i].uz};
  const std::vector<Vel> k3 = eval_velocity(stage);
  for (std::size_t i = 0; i < n; ++i)
    stage[i] = {x0[i].r + dt * k3[i].ur, x0[i].z + dt * k3[i].uz};
  const std::vector<Vel> k4 = eval_velocity(stage);

  PatchState out;
  out.t = s.t + dt;
  out.xi_value = s.xi_value;
  out.contours.reserve(s.contours.size());
  std::size_t k = 0;
  for (const auto& c : s.contours) {
    Contour nc;
    nc.closed = c.closed;
    nc.nodes.reserve(c.nodes.size());
    for (std::size_t i = 0; i < c.nodes.size(); ++i, ++k) {
      HalfPlanePoint p{
          x0[k].r + dt / 6.0 * (k1[k].ur + 2.0 * (k2[k].ur + k3[k].ur) + k4[k].ur),
          x0[k].z + dt / 6.0 * (k1[k].uz + 2.0 * (k2[k].uz + k3[k].uz) + k4[k].uz)};
      nc.nodes.push_back(detail::reflected(p, prm.r_axis_snap));
    }
    nc = remesh(nc, prm.h_min, prm.h_max, prm.curvature_budget);
    snap_axis(nc, prm.r_axis_snap);
    if (self_intersects(nc)) throw StepRejected(0.5 * dt);
    out.contours.push_back(std::move(nc));
  }

  std::size_t total_nodes = 0;
  for (const auto& c : out.contours) {
    total_nodes += c.nodes.size();
    const std::size_t m = c.nodes.size();
    for (std::size_t i = 0; i < m; ++i) {
      const double sp = dist(c.nodes[i], c.nodes[(i + 1) % m]);
      if (sp > 10.0 * prm.h_max) throw std::runtime_error("resolution exhausted");
    }
  }
  if (total_nodes > prm.max_nodes) throw std::runtime_error("resolution exhausted");
  return out;
}

inline BlobState step_blobs(const BlobState& s, double dt, const EvolveParams& prm) {
  if (dt == 0.0) return s;
  if (dt < 0.0) throw std::invalid_argument("step_blobs: dt must be positive");
  const std::size_t n = s.blobs.size();

  std::vector<HalfPlanePoint> x0(n);
  for (std::size_t i = 0; i < n; ++i) x0[i] = s.blobs[i].p;

  auto eval_velocity = [&](const std::vector<HalfPlanePoint>& pos) {
    BlobsSource src;
    src.core_radius = s.core_radius;
    src.blobs.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      src.blobs[i] = {detail::reflected(pos[i], prm.r_axis_snap), s.blobs[i].xi, s.blobs[i].dV};
    const SourceEvaluator eval{VorticitySource{std::move(src)}};
    return velocity_batch(eval, pos);
  };

  std::vector<HalfPlanePoint> stage(n);
  const auto k1 = eval_velocity(x0);
  for (std::size_t i = 0; i < n; ++i)
    stage[i] = {x0[i].r + 0.5 * dt * k1[i].ur, x0[i].z + 0.5 * dt * k1[i].uz};
  const auto k2 = eval_velocity(stage);
  for (std::size_t i = 0; i < n; ++i)
    stage[i] = {x0[i].r + 0.5 * dt * k2[i].ur, x0[i].z + 0.5 * dt * k2[i].uz};
  const auto k3 = eval_velocity(stage);
  for (std::size_t i = 0; i < n; ++i)
    stage[i] = {x0[i].r + dt * k3[i].ur, x0[i].z + dt * k3[i].uz};
  const auto k4 = eval_velocity(stage);

  BlobState out;
  out.t = s.t + dt;
  out.core_radius = s.core_radius;
  out.reflected = s.reflected;
  out.blobs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    HalfPlanePoint p{x0[i].r + dt / 6.0 * (k1[i].ur + 2.0 * (k2[i].ur + k3[i].ur) + k4[i].ur),
                     x0[i].z + dt / 6.0 * (k1[i].uz + 2.0 * (k2[i].uz + k3[i].uz) + k4[i].uz)};
    if (p.r < 0.0) {
      p.r = -p.r;
      ++out.reflected;
    }
    if (p.r < prm.r_axis_snap) p.r = 0.0;
    out.blobs[i] = {p, s.blobs[i].xi, s.blobs[i].dV};
  }
  return out;
}

inline SimState step_state(const SimState& s, double dt, const EvolveParams& prm) {
  if (const auto* p = std::get_if<PatchState>(&s)) return step_patch(*p, dt, prm);
  return step_blobs(std::get<BlobState>(s), dt, prm);
}

// Advance by dt, retrying rejected steps with two half steps up to max_depth
// times. A persistent rejection propagates to the caller, which stops the
// run cleanly.
inline SimState advance_state(const SimState& s, double dt, const EvolveParams& prm,
                              int max_depth = 2, int depth = 0) {
  try {
    return step_state(s, dt, prm);
  } catch (const StepRejected&) {
    if (depth >= max_depth) throw;
    SimState half = advance_state(s, 0.5 * dt, prm, max_depth, depth + 1);
    return advance_state(half, 0.5 * dt, prm, max_depth, depth + 1);
  }
}

struct RunOptions {
  double dt = 0.02;
  double t_end = 10.0;
  int observe_every = 25;   // observer cadence in steps
  int snapshot_every = 25;  // state snapshot cadence in steps
  int max_halvings = 2;
};

struct RunResult {
  std::vector<SimState> snapshots;  // at snapshot cadence, t = 0 included
  bool clean = true;
  std::string stop_reason;
  double t_reached = 0.0;
  long long steps_taken = 0;
};

// Fixed-step driver. Observers see immutable snapshots at the observe
// cadence (plus t = 0 and the final state); the snapshot trail is the
// velocity-history input for trajectory work. Deterministic given the
// configuration.
inline RunResult run(const SimState& s0, const RunOptions& opt,
                     const EvolveParams& prm,
                     const std::vector<std::function<void(const SimState&)>>& observers) {
  if (opt.dt <= 0.0) throw std::invalid_argument("run: dt must be positive");
  if (opt.t_end < 0.0) throw std::invalid_argument("run: t_end must be nonnegative");

  RunResult res;
  SimState state = s0;
  const long long n_steps = static_cast<long long>(std::llround(opt.t_end / opt.dt));

  auto observe = [&](const SimState& st) {
    for (const auto& f : observers) f(st);
  };

  res.snapshots.push_back(state);
  observe(state);
  for (long long k = 0; k < n_steps; ++k) {
    try {
      state = advance_state(state, opt.dt, prm, opt.max_halvings);
    } catch (const std::exception& e) {
      res.clean = false;
      res.stop_reason = e.what();
      break;
    }
    ++res.steps_taken;
    const bool last = (res.steps_taken == n_steps);
    if (res.steps_taken % opt.observe_every == 0 || last) observe(state);
    if (res.steps_taken % opt.snapshot_every == 0 || last) res.snapshots.push_back(state);
  }
  res.t_reached = state_time(state);
  return res;
}

}  // namespace hillfila
