// SPDX-License-Identifier: Apache-2.0
//
// Potential terms for pendulum-type flows on frame phase space: the
// plane-coupling potential <e1 ^ e2, Xi> against a fixed skew matrix,
// and the two-direction linear potential chi1 <g1,e1> + chi2 <g2,e2>.

#pragma once

#include <Eigen/Dense>

#include <utility>
#include <variant>

#include "stiefel/manifold.hpp"

namespace stiefel {

// V_I(e) = <e1 ^ e2, Xi> = -<Xi e1, e2> for a fixed skew coupling matrix.
struct PendulumIPotential {
  Mat coupling;  // n x n skew
};

// V_II(e) = chi1 <gamma1, e1> + chi2 <gamma2, e2> with unit directions.
struct PendulumIIPotential {
  double chi1 = 0, chi2 = 0;
  Vec gamma1, gamma2;
};

using PotentialSpec =
    std::variant<std::monostate, PendulumIPotential, PendulumIIPotential>;

inline bool has_potential(const PotentialSpec& pot) {
  return !std::holds_alternative<std::monostate>(pot);
}

// Throws if the coupling matrix is not skew (to 1e-12 relative) or the
// direction vectors are not unit length (to 1e-9) / of the given dimension.
void validate_potential(const PotentialSpec& pot, Eigen::Index n);

double potential_value(const PotentialSpec& pot, const CotangentState& s);

// Gradient with respect to (e1, e2); zero for the empty potential.
std::pair<Vec, Vec> potential_gradient(const PotentialSpec& pot,
                                       const CotangentState& s);

}  // namespace stiefel
