// SPDX-License-Identifier: Apache-2.0
//
// The n = 3 story: reduction of frame flows to spinning-body coordinates,
// gyrostat equations with a fixed rotor and a force direction, the
// magnetic Poisson bracket, fourth integrals for the three classical
// integrable gyrostats, and machine checks that a frame flow and its
// reduced body flow trace the same curve.

#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "stiefel/flows.hpp"
#include "stiefel/integrate.hpp"
#include "stiefel/manifold.hpp"

namespace stiefel {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/* ------------------------------------------------------------- body objects */

// Body angular momentum and the body frame coordinates of the fixed
// space direction.
struct BodyState {
  Vec3 M = Vec3::Zero();
  Vec3 gamma = Vec3::Zero();
};

// A gyrostat: inertia tensor, constant rotor momentum, force coupling.
struct GyrostatParams {
  Mat3 inertia = Mat3::Identity();
  Vec3 rotor = Vec3::Zero();
  Vec3 chi = Vec3::Zero();  // body-frame force direction times strength
};

// One frame sample reduced to body coordinates.
struct ReducedSample {
  Mat3 R;   // attitude (e1 e2 e1 x e2)
  Vec3 m;   // spatial angular momentum, vee of Phi at eta = 0
  Vec3 M;   // body angular momentum, vee of R^T Phi R
};

// Throws std::invalid_argument when the state is not three-dimensional.
ReducedSample reduce_to_so3(const CotangentState& s);

/* ---------------------------------------------------------------- equations */

struct BodyVelocity {
  Vec3 dM = Vec3::Zero(), dGamma = Vec3::Zero();
};

// Gyrostat equations with a force direction:
//   dM = (M + rotor) x Omega + gamma x chi,  dGamma = gamma x Omega,
// with Omega = inertia^{-1} M.
BodyVelocity euler_poisson_field(const GyrostatParams& gp, const BodyState& b);

// The same equations in the shifted momentum K = M + rotor, where they are
// Hamiltonian for the standard bracket:
//   dK = K x Omega + gamma x chi,  dGamma = gamma x Omega,
// with Omega = inertia^{-1} (K - rotor).  The dM slot of the result carries dK.
BodyVelocity shifted_euler_poisson_field(const GyrostatParams& gp, const Vec3& K,
                                         const Vec3& gamma);

/* ------------------------------------------------------------------ bracket */

struct BodyFunction {
  std::function<double(const BodyState&)> value;
  // gradient columns: d/dM, d/dGamma
  std::function<std::pair<Vec3, Vec3>(const BodyState&)> gradient;
};

// Rotor-shifted Poisson bracket on (M, gamma):
// {F,G} = -<M + rotor, F_M x G_M> - <gamma, F_M x G_gamma + F_gamma x G_M>.
double magnetic_bracket(const BodyFunction& F, const BodyFunction& G,
                        const Vec3& rotor, const BodyState& b);

/* ---------------------------------------------------------- integrable cases */

enum class GyrostatCase {
  ZhukovskiyVolterra,  // free gyrostat, any inertia: |M + rotor|^2
  LagrangeGyrostat,    // symmetric top with axial rotor and force: M3
  KowalevskiGyrostat,  // I = diag(1,1,1/2), axial rotor, planar force
};

// The extra conserved quantity of each case.  Throws std::invalid_argument
// when the parameters do not have the shape the case requires.
double fourth_integral(GyrostatCase which, const GyrostatParams& gp,
                       const BodyState& b);

/* ---------------------------------------------------------------- integration */

struct BodyTrajectory {
  std::vector<double> times;
  std::vector<BodyState> states;
};

// RK4 on the body equations (no constraints to enforce; |gamma| is checked).
BodyTrajectory body_integrate(const GyrostatParams& gp, const BodyState& b0,
                              double T, double h, int record_stride = 1);

/* ---------------------------------------------------------------- dictionary */

// Translate an n = 3 frame flow into its equivalent gyrostat.  Supported:
// the rank-3 family (free gyrostat), the kinetic family with plane-coupling
// potential along a fixed axis (symmetric top), and the kappa = 1 kinetic
// family with a matched-direction planar potential (the I = diag(1,1,1/2)
// case).  Throws std::invalid_argument outside the dictionary.
GyrostatParams reduced_gyrostat(const FlowSpec& flow);

// Which integrable case the reduced gyrostat of this flow falls into.
GyrostatCase gyrostat_case(const FlowSpec& flow);

// The fixed space direction whose body coordinates gamma tracks.
Vec3 reference_direction(const FlowSpec& flow);

// Max relative drift of the case's fourth integral along a body trajectory.
double fourth_integral_drift(GyrostatCase which, const GyrostatParams& gp,
                             const BodyState& b0, double T, double h);

struct EquivalenceReport {
  double max_deviation = 0;   // max over samples of |dM| + |dGamma|
  double fourth_drift = 0;    // fourth integral, body side, horizon 2T
  GyrostatCase which = GyrostatCase::ZhukovskiyVolterra;
  GyrostatParams params;
};

// Integrate the frame flow and the body flow from matched initial data and
// report the worst pointwise deviation between the two reductions, plus the
// fourth-integral drift of the body flow over twice the horizon.
EquivalenceReport equivalence_check(const FlowSpec& flow,
                                    const CotangentState& s0, double T,
                                    double h);

}  // namespace stiefel
