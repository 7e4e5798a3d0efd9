// SPDX-License-Identifier: Apache-2.0
//
// Time integration on frame phase space: classical RK4 in the ambient
// space with periodic reprojection onto the constraint manifold, plus an
// optional step-doubling adaptive mode.

#pragma once

#include <functional>
#include <vector>

#include "stiefel/flows.hpp"
#include "stiefel/manifold.hpp"

namespace stiefel {

using FieldFn = std::function<PhaseVelocity(const CotangentState&)>;

struct IntegratorConfig {
  double h = 1e-3;
  double T = 10.0;
  int projection_interval = 1;   // reproject every k steps
  double newton_tol = 1e-12;     // projection target residual
  int newton_max_iter = 10;
  int record_stride = 1;         // keep every k-th step
  double abort_residual = 1e-6;  // pre-projection drift limit
  bool adaptive = false;
  double adaptive_rtol = 1e-10;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<CotangentState> states;
  std::vector<ConstraintResidual> residuals;
  double sample_dt = 0;  // NaN when adaptive stepping was used
};

struct ProjectionStats {
  int iterations = 0;
  double initial_residual = 0;
  double final_residual = 0;
  double correction_norm = 0;
};

/* -------------------------------------------------------------------- steps */

// One classical Runge-Kutta 4 step in the ambient linear space.
CotangentState rk4_step(const FieldFn& field, const CotangentState& s,
                        double h);

// Project a near-manifold state back onto the constraint set: Gram-Schmidt
// on the frame columns, then the minimal-norm linear momentum correction,
// iterated to `tol`.  Throws std::runtime_error if the initial residual
// exceeds the projection basin (1e-2).
CotangentState project_constraints(const CotangentState& raw,
                                   double tol = 1e-12, int max_iter = 10,
                                   ProjectionStats* stats = nullptr);

/* --------------------------------------------------------------- integrate */

// Integrate the field from s0.  Aborts with std::runtime_error if the
// pre-projection constraint residual ever exceeds cfg.abort_residual.
Trajectory integrate(const FieldFn& field, const CotangentState& s0,
                     const IntegratorConfig& cfg);
Trajectory integrate(const FlowSpec& flow, const CotangentState& s0,
                     const IntegratorConfig& cfg);

}  // namespace stiefel
