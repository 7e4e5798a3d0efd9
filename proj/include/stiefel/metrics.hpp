// SPDX-License-Identifier: Apache-2.0
//
// Parameter families for the quadratic Hamiltonians on frame phase space:
// the four-coefficient family, the two-parameter kinetic family, the
// sub-Riemannian specializations, the six-coefficient rank-3 family used
// at n = 3, and the spectral-data map producing integrable coefficients.

#pragma once

#include <Eigen/Dense>

#include <string>
#include <variant>

#include "stiefel/manifold.hpp"
#include "stiefel/potentials.hpp"

namespace stiefel {

/* ------------------------------------------------------------ param families */

// H = 1/2 a1 <p1,p1> + 1/2 a2 <p2,p2> + a3 <p1,e2><p2,e1> + a4 <p1,p2>.
struct QuadAParams {
  double a1 = 1, a2 = 1, a3 = 0, a4 = 0;
};

// Six-coefficient family available at n = 3, quadratic in
// u = <p1,e3>, v = <p2,e3>, w = <e1,p2> - <e2,p1> with e3 = e1 x e2:
// H = 1/2 b1 u^2 + 1/2 b2 v^2 + 1/2 b3 w^2 + b4 uv + b5 wu + b6 wv.
struct QuadBParams {
  double b1 = 1, b2 = 1, b3 = 1, b4 = 0, b5 = 0, b6 = 0;
};

// Kinetic two-parameter family: the metric dual of the Lagrangian
// L = 1/(2 nu) (|xi1|^2 + |xi2|^2) + (1+2k)/(2 nu (1+k)) <e1,xi2><e2,xi1>.
struct NuKappaParams {
  double nu = 1, kappa = 0;
};

// Horizontal sub-Riemannian family: the a3 = (a1+a2)/2 boundary of QuadA.
struct SubRHParams {
  double a1 = 1, a2 = 1, a4 = 0;
};

// Degenerate-distribution sub-Riemannian family:
// H = 1/2 a1 <p1,p1> + a3 <p1,e2><p2,e1>.
struct SubRD0Params {
  double a1 = 1, a3 = 0;
};

using MetricParams = std::variant<QuadAParams, QuadBParams, NuKappaParams,
                                  SubRHParams, SubRD0Params>;

/* ------------------------------------------------------------- admissibility */

enum class MetricClass { Riemannian, SubRiemannianH, SubRiemannianD0, Invalid };

struct Admissibility {
  MetricClass cls = MetricClass::Invalid;
  std::string reason;  // empty when valid
};

// Classify a parameter set: positive-definite interior, the horizontal
// sub-Riemannian boundary a1 + a2 = 2 a3, the degenerate family, or invalid.
Admissibility check_admissible(const MetricParams& params);

/* -------------------------------------------------------------- conversions */

// Spectral data (alpha, beta) with distinct alpha entries; the induced
// four-coefficient metric makes the flow integrable for every n.
struct ManakovData {
  Eigen::Vector3d alpha, beta;
};

// a1 = (b1-b3)/(a1-a3), a2 = (b2-b3)/(a2-a3),
// a3 = (a1+a2)/2 - 2 (b1-b2)/(a1-a2), a4 = 0 (in the obvious notation).
QuadAParams manakov_to_params(const ManakovData& d);

// The kinetic family as a QuadA slice: a = (nu, nu, -nu(1+2k), 0).
QuadAParams quad_a_from_nu_kappa(const NuKappaParams& nk);

// At n = 3 each QuadA metric matches a QuadB one:
// b = (a1, a2, (a1+a2-2a3)/4, a4, 0, 0).
QuadBParams quad_b_from_quad_a(const QuadAParams& a);

// Coefficient matrix of the QuadB quadratic form in the order (v, u, w):
// [[b2, -b4, -b6], [-b4, b1, b5], [-b6, b5, b3]].  Its inverse is the
// inertia tensor of the equivalent spinning body.
Eigen::Matrix3d quad_b_matrix(const QuadBParams& b);

/* ------------------------------------------------------------------- energy */

// Hamiltonian value H(s) for any parameter family, plus potential if present.
double hamiltonian(const MetricParams& params, const PotentialSpec& pot,
                   const CotangentState& s);

// Lagrangian of the kinetic family on a frame tangent vector.
double lagrangian_nu_kappa(const NuKappaParams& nk, const CotangentState& s,
                           const TangentVector& xi);

}  // namespace stiefel
