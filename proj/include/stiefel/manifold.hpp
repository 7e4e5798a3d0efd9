// SPDX-License-Identifier: Apache-2.0
//
// Phase space for two-column orthonormal frames: the state container,
// the six constraint functions cutting out the cotangent bundle in
// R^{4n}, the contact form and its Reeb field, and helpers for
// generating and projecting states.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>

namespace stiefel {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Default tolerance below which a state counts as lying on the manifold.
inline constexpr double kConstraintTol = 1e-10;

/* ------------------------------------------------------------------- state */

// A point of T^* V(n,2) in ambient coordinates: two frame columns and two
// conjugate momentum columns, each in R^n.
struct CotangentState {
  Vec e1, e2, p1, p2;

  Eigen::Index n() const { return e1.size(); }

  static CotangentState Zero(Eigen::Index n) {
    return {Vec::Zero(n), Vec::Zero(n), Vec::Zero(n), Vec::Zero(n)};
  }
};

// A tangent vector to the frame manifold at some (e1, e2): velocities of the
// two columns.
struct TangentVector {
  Vec xi1, xi2;
};

/* -------------------------------------------------------------- constraints */

// Residuals of the six constraints: three first-order (orthonormality of the
// frame) and three derived (momenta tangent to the frame sphere conditions).
struct ConstraintResidual {
  double f11, f22, f12;  // <e1,e1>-1, <e2,e2>-1, <e1,e2>
  double g11, g22, g12;  // <e1,p1>, <e2,p2>, <e1,p2>+<e2,p1>

  double max_abs() const;
  std::array<double, 6> as_array() const {
    return {f11, f22, f12, g11, g22, g12};
  }
};

ConstraintResidual constraint_residuals(const CotangentState& s);
bool on_manifold(const CotangentState& s, double tol = kConstraintTol);
// Throws std::invalid_argument naming the worst residual if off-manifold.
void require_on_manifold(const CotangentState& s, double tol = kConstraintTol);

/* ----------------------------------------------------------- contact layer */

// The contact one-form evaluated on a tangent vector: alpha(xi) = -<e2, xi1>.
double contact_form(const CotangentState& s, const TangentVector& xi);

// The Reeb field of the contact form: (xi1, xi2) = (-e2, e1).  Validates that
// the state is on the manifold.
TangentVector reeb_field(const CotangentState& s);

// Rotate the frame (and momenta) by angle theta in the plane of the two
// columns: the structure-group action whose orbits the contact form fibres.
CotangentState rotate_so2(const CotangentState& s, double theta);

/* ------------------------------------------------------------- projections */

// Orthogonal projection of an ambient vector onto the tangent space of the
// frame component at s (removes the span of e1, e2 symmetrically for the
// mixed constraint).
TangentVector tangent_project(const CotangentState& s, const Vec& v1,
                              const Vec& v2);

// The plane spanned by the frame columns as a rank-2 skew matrix e1 ^ e2;
// validates the state first.
Mat grassmann_plane(const CotangentState& s);

// Draw a random on-manifold state: Gaussian columns, Gram-Schmidt on the
// frame, then the minimal-norm momentum correction.  Deterministic in `seed`.
CotangentState random_state(Eigen::Index n, std::uint64_t seed,
                            double momentum_scale = 1.0);

}  // namespace stiefel
