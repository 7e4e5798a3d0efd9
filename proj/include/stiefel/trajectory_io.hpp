// SPDX-License-Identifier: Apache-2.0
//
// CSV serialization of trajectories: full-precision decimal columns for
// state, constraint residuals, and integral values, plus the body-frame
// CSV produced by reduction.

#pragma once

#include <filesystem>
#include <string>

#include "stiefel/flows.hpp"
#include "stiefel/integrate.hpp"
#include "stiefel/rigidbody.hpp"

namespace stiefel {

// Shortest decimal that round-trips the double exactly.
std::string format_double(double x);

// Columns: t, e1_1..e1_n, e2_*, p1_*, p2_*, the six constraint residuals,
// then H, Psi, J1, J2 and the upper-triangle entries of Phi.
void write_trajectory_csv(const std::filesystem::path& file,
                          const Trajectory& traj, const FlowSpec& flow);

// Parse a trajectory CSV back (n recovered from the header).  Integral
// columns are ignored; state and residual columns are restored.
Trajectory read_trajectory_csv(const std::filesystem::path& file);

// Body-frame CSV for an n = 3 trajectory: t, the attitude matrix R
// (row-major), spatial momentum m, body momentum M, body direction Gamma
// when a reference direction is given, and |M + rotor|^2.
void write_body_csv(const std::filesystem::path& file, const Trajectory& traj,
                    double eta, const Vec3* gamma_space);

}  // namespace stiefel
