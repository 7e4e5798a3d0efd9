// SPDX-License-Identifier: Apache-2.0

#include "stiefel/integrate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "stiefel/algebra.hpp"

namespace stiefel {

namespace {

CotangentState axpy(const CotangentState& s, double c,
                    const PhaseVelocity& v) {
  return {s.e1 + c * v.de1, s.e2 + c * v.de2, s.p1 + c * v.dp1,
          s.p2 + c * v.dp2};
}

}  // namespace

CotangentState rk4_step(const FieldFn& field, const CotangentState& s,
                        double h) {
  PhaseVelocity k1 = field(s);
  PhaseVelocity k2 = field(axpy(s, h / 2, k1));
  PhaseVelocity k3 = field(axpy(s, h / 2, k2));
  PhaseVelocity k4 = field(axpy(s, h, k3));
  CotangentState out = s;
  out.e1 += (h / 6) * (k1.de1 + 2 * k2.de1 + 2 * k3.de1 + k4.de1);
  out.e2 += (h / 6) * (k1.de2 + 2 * k2.de2 + 2 * k3.de2 + k4.de2);
  out.p1 += (h / 6) * (k1.dp1 + 2 * k2.dp1 + 2 * k3.dp1 + k4.dp1);
  out.p2 += (h / 6) * (k1.dp2 + 2 * k2.dp2 + 2 * k3.dp2 + k4.dp2);
  return out;
}

CotangentState project_constraints(const CotangentState& raw, double tol,
                                   int max_iter, ProjectionStats* stats) {
  double initial = constraint_residuals(raw).max_abs();
  if (!(initial <= 1e-2)) {
    throw std::runtime_error(
        "projection basin exceeded: constraint residual " +
        std::to_string(initial));
  }
  CotangentState s = raw;
  int it = 0;
  double res = initial;
  while (res > tol && it < max_iter) {
    // Gram-Schmidt on the frame, then the minimal-norm momentum correction.
    s.e1.normalize();
    s.e2 -= s.e1.dot(s.e2) * s.e1;
    s.e2.normalize();
    double half12 = 0.5 * (s.e1.dot(s.p2) + s.e2.dot(s.p1));
    Vec q1 = s.p1, q2 = s.p2;
    s.p1 = q1 - s.e1.dot(q1) * s.e1 - half12 * s.e2;
    s.p2 = q2 - s.e2.dot(q2) * s.e2 - half12 * s.e1;
    res = constraint_residuals(s).max_abs();
    ++it;
  }
  if (stats) {
    stats->iterations = it;
    stats->initial_residual = initial;
    stats->final_residual = res;
    stats->correction_norm =
        std::sqrt((s.e1 - raw.e1).squaredNorm() + (s.e2 - raw.e2).squaredNorm() +
                  (s.p1 - raw.p1).squaredNorm() + (s.p2 - raw.p2).squaredNorm());
  }
  return s;
}

namespace {

void record(Trajectory& traj, double t, const CotangentState& s) {
  traj.times.push_back(t);
  traj.states.push_back(s);
  traj.residuals.push_back(constraint_residuals(s));
}

double state_norm(const CotangentState& s) {
  return std::sqrt(s.e1.squaredNorm() + s.e2.squaredNorm() +
                   s.p1.squaredNorm() + s.p2.squaredNorm());
}

double state_diff(const CotangentState& a, const CotangentState& b) {
  return std::sqrt((a.e1 - b.e1).squaredNorm() + (a.e2 - b.e2).squaredNorm() +
                   (a.p1 - b.p1).squaredNorm() + (a.p2 - b.p2).squaredNorm());
}

Trajectory integrate_fixed(const FieldFn& field, const CotangentState& s0,
                           const IntegratorConfig& cfg) {
  require(cfg.h > 0 && cfg.T > 0, "integrator: need h > 0 and T > 0");
  require(cfg.projection_interval >= 1 && cfg.record_stride >= 1,
          "integrator: intervals must be >= 1");
  long steps = std::lround(cfg.T / cfg.h);
  Trajectory traj;
  traj.sample_dt = cfg.h * cfg.record_stride;
  CotangentState s = project_constraints(s0, cfg.newton_tol,
                                         cfg.newton_max_iter);
  record(traj, 0.0, s);
  for (long k = 1; k <= steps; ++k) {
    s = rk4_step(field, s, cfg.h);
    double drift = constraint_residuals(s).max_abs();
    if (!(drift <= cfg.abort_residual)) {
      throw std::runtime_error("integration aborted at t = " +
                               std::to_string(k * cfg.h) +
                               ": pre-projection constraint residual " +
                               std::to_string(drift));
    }
    if (k % cfg.projection_interval == 0)
      s = project_constraints(s, cfg.newton_tol, cfg.newton_max_iter);
    if (k % cfg.record_stride == 0 || k == steps) record(traj, k * cfg.h, s);
  }
  return traj;
}

Trajectory integrate_adaptive(const FieldFn& field, const CotangentState& s0,
                              const IntegratorConfig& cfg) {
  // Step doubling: compare one h-step against two h/2-steps, adjust h to
  // hold the local error near adaptive_rtol, record every accepted step.
  Trajectory traj;
  traj.sample_dt = std::numeric_limits<double>::quiet_NaN();
  CotangentState s = project_constraints(s0, cfg.newton_tol,
                                         cfg.newton_max_iter);
  record(traj, 0.0, s);
  double t = 0, h = cfg.h;
  const double hmin = cfg.h * 1e-4, hmax = cfg.T / 10;
  while (t < cfg.T - 1e-14) {
    h = std::min(h, cfg.T - t);
    CotangentState big = rk4_step(field, s, h);
    CotangentState half = rk4_step(field, s, h / 2);
    CotangentState small = rk4_step(field, half, h / 2);
    double err = state_diff(big, small) / std::max(1.0, state_norm(small));
    if (err > cfg.adaptive_rtol && h > hmin) {
      h = std::max(hmin, 0.5 * h);
      continue;
    }
    double drift = constraint_residuals(small).max_abs();
    if (!(drift <= cfg.abort_residual)) {
      throw std::runtime_error("integration aborted at t = " +
                               std::to_string(t + h) +
                               ": pre-projection constraint residual " +
                               std::to_string(drift));
    }
    s = project_constraints(small, cfg.newton_tol, cfg.newton_max_iter);
    t += h;
    record(traj, t, s);
    if (err < 0.1 * cfg.adaptive_rtol) h = std::min(hmax, 2 * h);
  }
  return traj;
}

}  // namespace

Trajectory integrate(const FieldFn& field, const CotangentState& s0,
                     const IntegratorConfig& cfg) {
  return cfg.adaptive ? integrate_adaptive(field, s0, cfg)
                      : integrate_fixed(field, s0, cfg);
}

Trajectory integrate(const FlowSpec& flow, const CotangentState& s0,
                     const IntegratorConfig& cfg) {
  return integrate(field_function(flow), s0, cfg);
}

}  // namespace stiefel
