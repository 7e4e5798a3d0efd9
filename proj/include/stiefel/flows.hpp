// SPDX-License-Identifier: Apache-2.0
//
// Constrained Hamiltonian vector fields on frame phase space.  Each flow
// family has a closed-form field (multipliers resolved analytically) and
// every Hamiltonian admits a generic field that solves the 6x6 multiplier
// system numerically; the two must agree on-manifold.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <variant>

#include "stiefel/manifold.hpp"
#include "stiefel/metrics.hpp"
#include "stiefel/potentials.hpp"

namespace stiefel {

/* ---------------------------------------------------------------- velocity */

// Phase-space velocity together with the constraint multipliers that
// produced it (lambda couple to frame constraints, mu to momentum ones).
struct PhaseVelocity {
  Vec de1, de2, dp1, dp2;
  double lambda11 = 0, lambda12 = 0, lambda22 = 0;
  double mu11 = 0, mu12 = 0, mu22 = 0;
};

/* -------------------------------------------------------------- flow specs */

struct RiemannianAFlow {
  QuadAParams a;
  PotentialSpec potential;  // monostate for geodesic flow
};

struct SO3QuadBFlow {
  QuadBParams b;  // n = 3 only
};

struct SubRHFlow {
  SubRHParams a;
};

struct SubRD0Flow {
  SubRD0Params a;
};

struct NaturalFlow {
  double kappa = 0;  // kinetic part is NuKappa with nu = 1
  PotentialSpec potential;
};

using FlowFamily = std::variant<RiemannianAFlow, SO3QuadBFlow, SubRHFlow,
                                SubRD0Flow, NaturalFlow>;

// A complete flow: phase-space dimension, magnetic strength, family.
struct FlowSpec {
  Eigen::Index n = 3;
  double eta = 0;
  FlowFamily family;
};

// Throws std::invalid_argument on inadmissible parameters, wrong dimension
// (rank-3 family needs n = 3), or ill-formed potential.
void validate_flow(const FlowSpec& flow);

/* --------------------------------------------------- Hamiltonian machinery */

struct Gradients {
  Vec e1, e2, p1, p2;
};

// A Hamiltonian as value + ambient gradient, the inputs the generic
// multiplier solve needs.
struct HamiltonianSystem {
  std::function<double(const CotangentState&)> value;
  std::function<Gradients(const CotangentState&)> gradient;
};

HamiltonianSystem quad_a_system(const QuadAParams& a, const PotentialSpec& pot);
HamiltonianSystem quad_b_system(const QuadBParams& b);
HamiltonianSystem subr_h_system(const SubRHParams& a);
HamiltonianSystem subr_d0_system(const SubRD0Params& a);
HamiltonianSystem natural_system(double kappa, const PotentialSpec& pot);
HamiltonianSystem flow_system(const FlowSpec& flow);

// Central-difference gradient wrapper for oracle tests (step 1e-6).
HamiltonianSystem finite_difference_system(
    std::function<double(const CotangentState&)> value, double step = 1e-6);

// Trace invariants of the magnetic momentum matrix as Hamiltonians:
// tr(Phi^power) with the given magnetic strength folded in.
HamiltonianSystem casimir_system(int power, double eta);

/* ---------------------------------------------------------- generic field */

struct Multipliers {
  double mu11 = 0, mu12 = 0, mu22 = 0;
  double lambda11 = 0, lambda12 = 0, lambda22 = 0;
};

// Assemble the constrained Hamiltonian equations for given gradients and
// multipliers, without solving for the multipliers.  Exposed so that
// verification code can probe what happens with wrong multipliers.
PhaseVelocity assemble_hstar(const CotangentState& s, const Gradients& g,
                             double eta, const Multipliers& m);

// Time derivatives of the six constraint functions along a velocity.
std::array<double, 6> constraint_derivatives(const CotangentState& s,
                                             const PhaseVelocity& v);

// Solve the 6x6 linear system for the multipliers that keep all constraint
// derivatives zero, then assemble the field.  Throws std::runtime_error if
// the system is numerically singular.
PhaseVelocity generic_field(const HamiltonianSystem& sys,
                            const CotangentState& s, double eta);

/* ------------------------------------------------------- closed-form fields */

PhaseVelocity riemannian_field(const QuadAParams& a, const PotentialSpec& pot,
                               const CotangentState& s, double eta);
PhaseVelocity so3_quadb_field(const QuadBParams& b, const CotangentState& s,
                              double eta);
PhaseVelocity subr_h_field(const SubRHParams& a, const CotangentState& s,
                           double eta);
PhaseVelocity subr_d0_field(const SubRD0Params& a, const CotangentState& s,
                            double eta);
PhaseVelocity natural_field(double kappa, const PotentialSpec& pot,
                            const CotangentState& s, double eta);

// Dispatch to the closed-form field of the family.
PhaseVelocity evaluate_field(const FlowSpec& flow, const CotangentState& s);

// Hamiltonian value of the flow at a state.
double flow_hamiltonian(const FlowSpec& flow, const CotangentState& s);

// The field as a reusable closure (validates the spec once).
std::function<PhaseVelocity(const CotangentState&)> field_function(
    const FlowSpec& flow);

}  // namespace stiefel
