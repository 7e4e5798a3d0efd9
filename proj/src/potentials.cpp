// SPDX-License-Identifier: Apache-2.0

#include "stiefel/potentials.hpp"

#include <cmath>
#include <stdexcept>

#include "stiefel/algebra.hpp"

namespace stiefel {

void validate_potential(const PotentialSpec& pot, Eigen::Index n) {
  if (const auto* p1 = std::get_if<PendulumIPotential>(&pot)) {
    require(p1->coupling.rows() == n && p1->coupling.cols() == n,
            "pendulum_1 coupling: expected " + std::to_string(n) + "x" +
                std::to_string(n) + " matrix");
    double scale = std::max(1.0, p1->coupling.norm());
    require((p1->coupling + p1->coupling.transpose()).norm() <= 1e-12 * scale,
            "pendulum_1 coupling: matrix must be skew-symmetric");
  } else if (const auto* p2 = std::get_if<PendulumIIPotential>(&pot)) {
    require(p2->gamma1.size() == n && p2->gamma2.size() == n,
            "pendulum_2 directions: expected vectors of length " +
                std::to_string(n));
    require(std::abs(p2->gamma1.norm() - 1.0) <= 1e-9 &&
                std::abs(p2->gamma2.norm() - 1.0) <= 1e-9,
            "pendulum_2 directions: gamma1, gamma2 must be unit vectors");
  }
}

double potential_value(const PotentialSpec& pot, const CotangentState& s) {
  if (const auto* p1 = std::get_if<PendulumIPotential>(&pot))
    return -(p1->coupling * s.e1).dot(s.e2);
  if (const auto* p2 = std::get_if<PendulumIIPotential>(&pot))
    return p2->chi1 * p2->gamma1.dot(s.e1) + p2->chi2 * p2->gamma2.dot(s.e2);
  return 0.0;
}

std::pair<Vec, Vec> potential_gradient(const PotentialSpec& pot,
                                       const CotangentState& s) {
  if (const auto* p1 = std::get_if<PendulumIPotential>(&pot))
    return {p1->coupling * s.e2, -(p1->coupling * s.e1)};
  if (const auto* p2 = std::get_if<PendulumIIPotential>(&pot))
    return {p2->chi1 * p2->gamma1, p2->chi2 * p2->gamma2};
  Eigen::Index n = s.n();
  return {Vec::Zero(n), Vec::Zero(n)};
}

}  // namespace stiefel
