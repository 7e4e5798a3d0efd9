// SPDX-License-Identifier: Apache-2.0

#include "stiefel/rigidbody.hpp"

#include <cmath>
#include <stdexcept>

#include "stiefel/algebra.hpp"
#include "stiefel/integrals.hpp"

namespace stiefel {

namespace {

Vec3 vee(const Mat3& M) { return Vec3(M(2, 1), M(0, 2), M(1, 0)); }

bool near(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool axial(const Vec3& v, double tol = 1e-12) {
  return std::abs(v[0]) <= tol && std::abs(v[1]) <= tol;
}

bool diagonal3(const Mat3& A, double tol = 1e-12) {
  double scale = std::max(1.0, A.norm());
  return std::abs(A(0, 1)) <= tol * scale && std::abs(A(0, 2)) <= tol * scale &&
         std::abs(A(1, 0)) <= tol * scale && std::abs(A(1, 2)) <= tol * scale &&
         std::abs(A(2, 0)) <= tol * scale && std::abs(A(2, 1)) <= tol * scale;
}

}  // namespace

ReducedSample reduce_to_so3(const CotangentState& s) {
  require(s.n() == 3, "reduce_to_so3: state must be three-dimensional");
  Vec3 e1 = s.e1, e2 = s.e2;
  Vec3 e3 = e1.cross(e2);
  Mat3 R;
  R.col(0) = e1;
  R.col(1) = e2;
  R.col(2) = e3;
  Mat3 phi0 = momentum_map(s, 0.0);
  ReducedSample out;
  out.R = R;
  out.m = vee(phi0);
  out.M = vee(R.transpose() * phi0 * R);
  return out;
}

BodyVelocity euler_poisson_field(const GyrostatParams& gp,
                                 const BodyState& b) {
  Vec3 omega = gp.inertia.inverse() * b.M;
  BodyVelocity v;
  v.dM = (b.M + gp.rotor).cross(omega) + b.gamma.cross(gp.chi);
  v.dGamma = b.gamma.cross(omega);
  return v;
}

BodyVelocity shifted_euler_poisson_field(const GyrostatParams& gp,
                                         const Vec3& K, const Vec3& gamma) {
  Vec3 omega = gp.inertia.inverse() * (K - gp.rotor);
  BodyVelocity v;
  v.dM = K.cross(omega) + gamma.cross(gp.chi);
  v.dGamma = gamma.cross(omega);
  return v;
}

double magnetic_bracket(const BodyFunction& F, const BodyFunction& G,
                        const Vec3& rotor, const BodyState& b) {
  auto [Fm, Fg] = F.gradient(b);
  auto [Gm, Gg] = G.gradient(b);
  return -(b.M + rotor).dot(Fm.cross(Gm)) -
         b.gamma.dot(Fm.cross(Gg) + Fg.cross(Gm));
}

double fourth_integral(GyrostatCase which, const GyrostatParams& gp,
                       const BodyState& b) {
  switch (which) {
    case GyrostatCase::ZhukovskiyVolterra: {
      require(gp.chi.norm() == 0,
              "free-gyrostat integral requires a vanishing force direction");
      return (b.M + gp.rotor).squaredNorm();
    }
    case GyrostatCase::LagrangeGyrostat: {
      require(diagonal3(gp.inertia) && near(gp.inertia(0, 0), gp.inertia(1, 1)),
              "symmetric-top integral requires inertia diag(I1, I1, I3)");
      require(axial(gp.rotor) && axial(gp.chi),
              "symmetric-top integral requires axial rotor and force");
      return b.M[2];
    }
    case GyrostatCase::KowalevskiGyrostat: {
      require(diagonal3(gp.inertia) && near(gp.inertia(0, 0), 1.0) &&
                  near(gp.inertia(1, 1), 1.0) && near(gp.inertia(2, 2), 0.5),
              "Kowalevski integral requires inertia diag(1, 1, 1/2)");
      require(axial(gp.rotor), "Kowalevski integral requires an axial rotor");
      require(std::abs(gp.chi[2]) <= 1e-12,
              "Kowalevski integral requires a planar force direction");
      double l = gp.rotor[2];
      double c = std::hypot(gp.chi[0], gp.chi[1]);
      // Rotate about the symmetry axis so the force points along axis 1;
      // the equations are equivariant under this rotation.
      double phi = std::atan2(gp.chi[1], gp.chi[0]);
      double co = std::cos(phi), si = std::sin(phi);
      Vec3 K = b.M + gp.rotor;
      double K1 = co * K[0] + si * K[1];
      double K2 = -si * K[0] + co * K[1];
      double K3 = K[2];
      double G1 = co * b.gamma[0] + si * b.gamma[1];
      double G2 = -si * b.gamma[0] + co * b.gamma[1];
      double G3 = b.gamma[2];
      double z1 = K1 * K1 - K2 * K2 - 2 * c * G1;
      double z2 = 2 * K1 * K2 - 2 * c * G2;
      return z1 * z1 + z2 * z2 +
             8 * l * (K3 - 2 * l) * (K1 * K1 + K2 * K2) -
             16 * c * l * K1 * G3;
    }
  }
  throw std::invalid_argument("unknown gyrostat case");
}

BodyTrajectory body_integrate(const GyrostatParams& gp, const BodyState& b0,
                              double T, double h, int record_stride) {
  require(h > 0 && T > 0 && record_stride >= 1, "body_integrate: bad config");
  require(std::abs(b0.gamma.norm() - 1.0) <= 1e-9 || b0.gamma.norm() == 0,
          "body_integrate: gamma must be a unit vector (or zero)");
  Mat3 Ainv = gp.inertia.inverse();
  auto field = [&](const BodyState& b) {
    Vec3 omega = Ainv * b.M;
    BodyVelocity v;
    v.dM = (b.M + gp.rotor).cross(omega) + b.gamma.cross(gp.chi);
    v.dGamma = b.gamma.cross(omega);
    return v;
  };
  auto axpy = [](const BodyState& b, double c, const BodyVelocity& v) {
    return BodyState{b.M + c * v.dM, b.gamma + c * v.dGamma};
  };

  BodyTrajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(b0);
  BodyState b = b0;
  long steps = std::lround(T / h);
  for (long k = 1; k <= steps; ++k) {
    BodyVelocity k1 = field(b);
    BodyVelocity k2 = field(axpy(b, h / 2, k1));
    BodyVelocity k3 = field(axpy(b, h / 2, k2));
    BodyVelocity k4 = field(axpy(b, h, k3));
    b.M += (h / 6) * (k1.dM + 2 * k2.dM + 2 * k3.dM + k4.dM);
    b.gamma += (h / 6) * (k1.dGamma + 2 * k2.dGamma + 2 * k3.dGamma + k4.dGamma);
    if (k % record_stride == 0 || k == steps) {
      traj.times.push_back(k * h);
      traj.states.push_back(b);
    }
  }
  return traj;
}

/* ----------------------------------------------------------------- dictionary */

namespace {

const NaturalFlow* natural_of(const FlowSpec& flow) {
  return std::get_if<NaturalFlow>(&flow.family);
}

// The plane-coupling matrix of a 3x3 skew Xi as axis * strength.
void split_axis(const Mat& Xi, Vec3* axis, double* strength) {
  Vec3 w(Xi(2, 1), Xi(0, 2), Xi(1, 0));
  *strength = w.norm();
  *axis = *strength > 0 ? Vec3(w / *strength) : Vec3(0, 0, 1);
}

}  // namespace

GyrostatParams reduced_gyrostat(const FlowSpec& flow) {
  require(flow.n == 3, "reduction dictionary requires n = 3");
  GyrostatParams gp;
  gp.rotor = Vec3(0, 0, -flow.eta);

  if (const auto* qb = std::get_if<SO3QuadBFlow>(&flow.family)) {
    gp.inertia = quad_b_matrix(qb->b).inverse();
    return gp;
  }
  if (const auto* r = std::get_if<RiemannianAFlow>(&flow.family)) {
    require(!has_potential(r->potential),
            "no gyrostat dictionary for this potential/metric combination");
    gp.inertia = quad_b_matrix(quad_b_from_quad_a(r->a)).inverse();
    return gp;
  }
  const auto* nf = natural_of(flow);
  require(nf != nullptr,
          "no gyrostat dictionary for this flow family");
  gp.inertia = Vec3(1, 1, 1.0 / (1.0 + nf->kappa)).asDiagonal();
  if (const auto* p1 = std::get_if<PendulumIPotential>(&nf->potential)) {
    Vec3 axis;
    double strength;
    split_axis(p1->coupling, &axis, &strength);
    gp.chi = Vec3(0, 0, -strength);
    return gp;
  }
  if (const auto* p2 = std::get_if<PendulumIIPotential>(&nf->potential)) {
    require(nf->kappa == 1.0,
            "two-direction potential reduces only at kappa = 1");
    require((p2->gamma1 - p2->gamma2).norm() <= 1e-12,
            "two-direction potential reduces only for matched directions");
    gp.chi = Vec3(p2->chi1, p2->chi2, 0);
    return gp;
  }
  return gp;  // free kinetic flow
}

GyrostatCase gyrostat_case(const FlowSpec& flow) {
  if (const auto* nf = natural_of(flow)) {
    if (std::holds_alternative<PendulumIPotential>(nf->potential))
      return GyrostatCase::LagrangeGyrostat;
    if (std::holds_alternative<PendulumIIPotential>(nf->potential))
      return GyrostatCase::KowalevskiGyrostat;
  }
  return GyrostatCase::ZhukovskiyVolterra;
}

Vec3 reference_direction(const FlowSpec& flow) {
  if (const auto* nf = natural_of(flow)) {
    if (const auto* p1 = std::get_if<PendulumIPotential>(&nf->potential)) {
      Vec3 axis;
      double strength;
      split_axis(p1->coupling, &axis, &strength);
      return axis;
    }
    if (const auto* p2 = std::get_if<PendulumIIPotential>(&nf->potential))
      return Vec3(p2->gamma1);
  }
  return Vec3(0, 0, 1);
}

double fourth_integral_drift(GyrostatCase which, const GyrostatParams& gp,
                             const BodyState& b0, double T, double h) {
  BodyTrajectory traj = body_integrate(gp, b0, T, h, 10);
  double f0 = fourth_integral(which, gp, traj.states.front());
  double worst = 0;
  for (const auto& b : traj.states) {
    double f = fourth_integral(which, gp, b);
    worst = std::max(worst, std::abs(f - f0) / std::max(1.0, std::abs(f0)));
  }
  return worst;
}

EquivalenceReport equivalence_check(const FlowSpec& flow,
                                    const CotangentState& s0, double T,
                                    double h) {
  EquivalenceReport rep;
  rep.params = reduced_gyrostat(flow);
  rep.which = gyrostat_case(flow);
  Vec3 gamma_space = reference_direction(flow);

  IntegratorConfig cfg;
  cfg.h = h;
  cfg.T = T;
  cfg.record_stride = 10;
  Trajectory frame = integrate(flow, s0, cfg);

  ReducedSample r0 = reduce_to_so3(frame.states.front());
  BodyState b0{r0.M, r0.R.transpose() * gamma_space};
  BodyTrajectory body =
      body_integrate(rep.params, b0, T, h, cfg.record_stride);

  std::size_t m = std::min(frame.states.size(), body.states.size());
  for (std::size_t k = 0; k < m; ++k) {
    ReducedSample r = reduce_to_so3(frame.states[k]);
    Vec3 gamma_body = r.R.transpose() * gamma_space;
    rep.max_deviation = std::max(
        rep.max_deviation, (r.M - body.states[k].M).norm() +
                               (gamma_body - body.states[k].gamma).norm());
  }
  rep.fourth_drift =
      fourth_integral_drift(rep.which, rep.params, b0, 2 * T, h);
  return rep;
}

}  // namespace stiefel
