// Unit tests for the constrained Hamiltonian vector fields: frozen field
// values, closed-form versus generic multiplier solves, tangency to the
// constraints, momentum-plane evolution identities, and the multiplier
// machinery's failure modes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stiefel/algebra.hpp"
#include "stiefel/flows.hpp"
#include "stiefel/manifold.hpp"

using stiefel::CotangentState;
using stiefel::FlowSpec;
using stiefel::Mat;
using stiefel::NaturalFlow;
using stiefel::PhaseVelocity;
using stiefel::QuadAParams;
using stiefel::QuadBParams;
using stiefel::RiemannianAFlow;
using stiefel::SO3QuadBFlow;
using stiefel::SubRD0Flow;
using stiefel::SubRD0Params;
using stiefel::SubRHFlow;
using stiefel::SubRHParams;
using stiefel::Vec;

namespace {

Vec unit(int n, int i) {
  Vec e = Vec::Zero(n);
  e[i] = 1.0;
  return e;
}

CotangentState frame_state(int n) {
  CotangentState s = CotangentState::Zero(n);
  s.e1 = unit(n, 0);
  s.e2 = unit(n, 1);
  return s;
}

// Relative gap between two phase velocities over all four blocks.
double field_gap(const PhaseVelocity& x, const PhaseVelocity& y) {
  double num = (x.de1 - y.de1).norm() + (x.de2 - y.de2).norm() +
               (x.dp1 - y.dp1).norm() + (x.dp2 - y.dp2).norm();
  double den = y.de1.norm() + y.de2.norm() + y.dp1.norm() + y.dp2.norm();
  return num / std::max(1.0, den);
}

double max_constraint_derivative(const CotangentState& s,
                                 const PhaseVelocity& v) {
  auto d = stiefel::constraint_derivatives(s, v);
  double m = 0;
  for (double x : d) m = std::max(m, std::abs(x));
  return m;
}

Mat random_skew(int n, int seed) {
  std::srand(seed);
  Mat X = Mat::Random(n, n);
  X = ((X - X.transpose()) / 2).eval();
  return X / X.norm();
}

// Magnetic momentum plane Phi_eta = p1 ^ e1 + p2 ^ e2 + eta e1 ^ e2.
Mat phi_eta(const CotangentState& s, double eta) {
  return stiefel::wedge(s.p1, s.e1) + stiefel::wedge(s.p2, s.e2) +
         eta * stiefel::wedge(s.e1, s.e2);
}

// Time derivative of Phi_eta along a phase velocity.
Mat phi_dot(const CotangentState& s, const PhaseVelocity& v, double eta) {
  return stiefel::wedge(v.dp1, s.e1) + stiefel::wedge(s.p1, v.de1) +
         stiefel::wedge(v.dp2, s.e2) + stiefel::wedge(s.p2, v.de2) +
         eta * (stiefel::wedge(v.de1, s.e2) + stiefel::wedge(s.e1, v.de2));
}

double psi_of(const CotangentState& s) {
  return s.e1.dot(s.p2) - s.e2.dot(s.p1);
}

}  // namespace

TEST_CASE("frozen field values at reference states") {
  // Round metric, no magnetic term: a great circle in the first column.
  auto s = frame_state(3);
  s.p1 = unit(3, 2);
  PhaseVelocity v =
      stiefel::riemannian_field(QuadAParams{1, 1, 0, 0}, {}, s, 0.0);
  CHECK((v.de1 - unit(3, 2)).norm() < 1e-15);
  CHECK(v.de2.norm() < 1e-15);
  CHECK((v.dp1 + unit(3, 0)).norm() < 1e-15);
  CHECK(v.dp2.norm() < 1e-15);

  // General coefficients with a magnetic term at the same state.
  QuadAParams a{1.3, 0.8, 0.2, 0.4};
  double eta = 0.7;
  PhaseVelocity w = stiefel::riemannian_field(a, {}, s, eta);
  CHECK((w.de1 - a.a1 * unit(3, 2)).norm() < 1e-14);
  CHECK((w.de2 - a.a4 * unit(3, 2)).norm() < 1e-14);
  CHECK((w.dp1 - (eta * a.a4 * unit(3, 2) - a.a1 * unit(3, 0) -
                  a.a4 / 2 * unit(3, 1))).norm() < 1e-14);
  CHECK((w.dp2 - (-eta * a.a1 * unit(3, 2) - a.a4 / 2 * unit(3, 0))).norm() <
        1e-14);

  // Horizontal sub-Riemannian standard parameters: the magnetic term only
  // feeds the second momentum at this state.
  PhaseVelocity h = stiefel::subr_h_field(SubRHParams{1, 1, 0}, s, 0.5);
  CHECK((h.de1 - unit(3, 2)).norm() < 1e-14);
  CHECK(h.de2.norm() < 1e-14);
  CHECK((h.dp1 + unit(3, 0)).norm() < 1e-14);
  CHECK((h.dp2 + 0.5 * unit(3, 2)).norm() < 1e-14);

  // Two-direction potential at rest: pure force along the directions.
  stiefel::PendulumIIPotential pot;
  pot.chi1 = 1.0;
  pot.chi2 = 1.0;
  pot.gamma1 = unit(3, 2);
  pot.gamma2 = unit(3, 2);
  auto rest = frame_state(3);
  PhaseVelocity f = stiefel::natural_field(1.0, pot, rest, 0.0);
  CHECK(f.de1.norm() < 1e-15);
  CHECK(f.de2.norm() < 1e-15);
  CHECK((f.dp1 + unit(3, 2)).norm() < 1e-14);
  CHECK((f.dp2 + unit(3, 2)).norm() < 1e-14);
}

TEST_CASE("zero momentum gives a zero field for kinetic flows") {
  for (int n : {3, 4}) {
    auto s = stiefel::random_state(n, 3, 0.0);
    PhaseVelocity vs[] = {
        stiefel::riemannian_field(QuadAParams{1.3, 0.8, 0.2, 0.4}, {}, s, 0.5),
        stiefel::subr_h_field(SubRHParams{1.2, 0.7, 0.3}, s, 0.5),
        stiefel::subr_d0_field(SubRD0Params{1.0, -0.5}, s, 0.5),
        stiefel::natural_field(0.7, {}, s, 0.5)};
    for (const auto& v : vs) {
      CHECK(v.de1.norm() + v.de2.norm() + v.dp1.norm() + v.dp2.norm() < 1e-14);
      CHECK(std::abs(v.lambda11) + std::abs(v.lambda12) +
                std::abs(v.lambda22) + std::abs(v.mu11) + std::abs(v.mu12) +
                std::abs(v.mu22) < 1e-14);
    }
    if (n == 3) {
      auto v = stiefel::so3_quadb_field(QuadBParams{1, 1, 0.5, 0.2, 0.1, 0},
                                        s, 0.5);
      CHECK(v.de1.norm() + v.de2.norm() + v.dp1.norm() + v.dp2.norm() < 1e-12);
    }
  }
}

TEST_CASE("horizontal family: contact distribution and the QuadA boundary") {
  SubRHParams sh{1.2, 0.7, 0.3};
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto s = stiefel::random_state(4, seed);
    PhaseVelocity v = stiefel::subr_h_field(sh, s, 0.4);
    // The frame velocity stays in the contact distribution: each column's
    // velocity is orthogonal to the other column.
    CHECK(std::abs(s.e2.dot(v.de1)) < 1e-13);
    CHECK(std::abs(s.e1.dot(v.de2)) < 1e-13);

    // On the manifold the field coincides with the four-coefficient family
    // at the boundary value a3 = (a1+a2)/2.
    QuadAParams boundary{sh.a1, sh.a2, (sh.a1 + sh.a2) / 2, sh.a4};
    PhaseVelocity r = stiefel::riemannian_field(boundary, {}, s, 0.4);
    CHECK(field_gap(r, v) < 1e-13);
  }
}

TEST_CASE("degenerate family: second column moves along the first") {
  SubRD0Params sd{1.0, -0.5};
  for (std::uint64_t seed = 5; seed <= 8; ++seed) {
    auto s = stiefel::random_state(4, seed);
    PhaseVelocity v = stiefel::subr_d0_field(sd, s, 0.3);
    Vec residual = v.de2 - s.e1.dot(v.de2) * s.e1;
    CHECK(residual.norm() < 1e-14);
  }
}

TEST_CASE("kinetic family at kappa = -1/2 is the round metric") {
  for (std::uint64_t seed = 9; seed <= 11; ++seed) {
    auto s = stiefel::random_state(5, seed);
    PhaseVelocity nat = stiefel::natural_field(-0.5, {}, s, 0.6);
    PhaseVelocity round =
        stiefel::riemannian_field(QuadAParams{1, 1, 0, 0}, {}, s, 0.6);
    CHECK(field_gap(nat, round) < 1e-12);
  }
}

TEST_CASE("plane-coupling potential with zero coupling is the free flow") {
  stiefel::PendulumIPotential trivial{Mat::Zero(4, 4)};
  for (std::uint64_t seed = 12; seed <= 13; ++seed) {
    auto s = stiefel::random_state(4, seed);
    PhaseVelocity with = stiefel::natural_field(0.7, trivial, s, 0.5);
    PhaseVelocity without = stiefel::natural_field(0.7, {}, s, 0.5);
    CHECK(field_gap(with, without) < 1e-15);
  }
}

TEST_CASE("closed-form fields match the generic multiplier solve") {
  const double tol = 1e-11;
  for (double eta : {0.0, 0.5}) {
    for (int n : {3, 4, 6}) {
      for (std::uint64_t seed = 20; seed <= 22; ++seed) {
        auto s = stiefel::random_state(n, seed);

        QuadAParams a{1.3, 0.8, 0.2, 0.4};
        CHECK(field_gap(
                  stiefel::riemannian_field(a, {}, s, eta),
                  stiefel::generic_field(stiefel::quad_a_system(a, {}), s,
                                         eta)) < tol);

        SubRHParams sh{1.2, 0.7, 0.3};
        CHECK(field_gap(
                  stiefel::subr_h_field(sh, s, eta),
                  stiefel::generic_field(stiefel::subr_h_system(sh), s, eta)) <
              tol);

        SubRD0Params sd{1.0, -0.5};
        CHECK(field_gap(
                  stiefel::subr_d0_field(sd, s, eta),
                  stiefel::generic_field(stiefel::subr_d0_system(sd), s,
                                         eta)) < tol);

        stiefel::PendulumIPotential pend1{random_skew(n, 77)};
        CHECK(field_gap(stiefel::natural_field(0.7, pend1, s, eta),
                        stiefel::generic_field(
                            stiefel::natural_system(0.7, pend1), s, eta)) <
              tol);

        stiefel::PendulumIIPotential pend2;
        pend2.chi1 = 0.8;
        pend2.chi2 = -0.5;
        auto dirs = stiefel::random_state(n, 1234);
        pend2.gamma1 = dirs.e1;
        pend2.gamma2 = dirs.e2;
        CHECK(field_gap(stiefel::natural_field(1.0, pend2, s, eta),
                        stiefel::generic_field(
                            stiefel::natural_system(1.0, pend2), s, eta)) <
              tol);
      }
    }

    // The rank-3 family: closed evaluation against the generic solve fed by
    // finite-difference gradients of the same Hamiltonian value.
    QuadBParams b{1.4, 0.9, 0.5, 0.2, -0.1, 0.15};
    for (std::uint64_t seed = 30; seed <= 31; ++seed) {
      auto s = stiefel::random_state(3, seed);
      auto sys = stiefel::quad_b_system(b);
      auto fd = stiefel::finite_difference_system(sys.value);
      CHECK(field_gap(stiefel::so3_quadb_field(b, s, eta),
                      stiefel::generic_field(fd, s, eta)) < 1e-6);
    }
  }
}

TEST_CASE("fields are tangent to all six constraints") {
  for (double eta : {0.0, 0.5}) {
    for (std::uint64_t seed = 40; seed <= 42; ++seed) {
      auto s = stiefel::random_state(4, seed);
      CHECK(max_constraint_derivative(
                s, stiefel::riemannian_field(QuadAParams{1.3, 0.8, 0.2, 0.4},
                                             {}, s, eta)) < 1e-12);
      CHECK(max_constraint_derivative(
                s, stiefel::subr_h_field(SubRHParams{1.2, 0.7, 0.3}, s,
                                         eta)) < 1e-12);
      CHECK(max_constraint_derivative(
                s, stiefel::subr_d0_field(SubRD0Params{1.0, -0.5}, s, eta)) <
            1e-12);
      stiefel::PendulumIPotential pend1{random_skew(4, 55)};
      CHECK(max_constraint_derivative(
                s, stiefel::natural_field(0.7, pend1, s, eta)) < 1e-12);

      auto s3 = stiefel::random_state(3, seed);
      CHECK(max_constraint_derivative(
                s3, stiefel::so3_quadb_field(
                        QuadBParams{1.4, 0.9, 0.5, 0.2, -0.1, 0.15}, s3,
                        eta)) < 1e-10);
    }
  }
}

TEST_CASE("momentum plane evolution along the flows") {
  // Zero-potential quadratic flows conserve the magnetic momentum plane at
  // the field level: the total time derivative of Phi_eta vanishes.
  for (double eta : {0.0, 0.5}) {
    for (std::uint64_t seed = 50; seed <= 51; ++seed) {
      auto s = stiefel::random_state(4, seed);
      CHECK(phi_dot(s,
                    stiefel::riemannian_field(QuadAParams{1.3, 0.8, 0.2, 0.4},
                                              {}, s, eta),
                    eta).norm() < 1e-12);
      CHECK(phi_dot(s,
                    stiefel::subr_h_field(SubRHParams{1.2, 0.7, 0.3}, s, eta),
                    eta).norm() < 1e-12);
      CHECK(phi_dot(s,
                    stiefel::subr_d0_field(SubRD0Params{1.0, -0.5}, s, eta),
                    eta).norm() < 1e-12);
      CHECK(phi_dot(s, stiefel::natural_field(0.7, {}, s, eta), eta).norm() <
            1e-12);

      auto s3 = stiefel::random_state(3, seed);
      CHECK(phi_dot(s3,
                    stiefel::so3_quadb_field(
                        QuadBParams{1.4, 0.9, 0.5, 0.2, -0.1, 0.15}, s3, eta),
                    eta).norm() < 1e-10);
    }
  }

  // With a plane-coupling potential the plane rotates by the coupling:
  // dPhi/dt = [Xi, e1 ^ e2].
  Mat Xi = random_skew(4, 60);
  for (double eta : {0.0, 0.5}) {
    auto s = stiefel::random_state(4, 61);
    PhaseVelocity v =
        stiefel::natural_field(0.7, stiefel::PendulumIPotential{Xi}, s, eta);
    Mat expected = stiefel::commutator(Xi, stiefel::grassmann_plane(s));
    CHECK((phi_dot(s, v, eta) - expected).norm() < 1e-12);
  }

  // For the kinetic family the frame plane itself rotates by the momentum
  // plane: d(e1 ^ e2)/dt = [Phi_eta, e1 ^ e2].
  for (double eta : {0.0, 0.5}) {
    for (double kappa : {0.0, 0.8}) {
      auto s = stiefel::random_state(4, 62);
      PhaseVelocity v = stiefel::natural_field(kappa, {}, s, eta);
      Mat lhs = stiefel::wedge(v.de1, s.e2) + stiefel::wedge(s.e1, v.de2);
      Mat rhs = stiefel::commutator(phi_eta(s, eta),
                                    stiefel::grassmann_plane(s));
      CHECK((lhs - rhs).norm() < 1e-12);
    }
  }

  // At kappa = 1 the frame columns themselves follow the momentum plane up
  // to an in-plane rotation by Psi - eta.
  stiefel::PendulumIIPotential pot;
  pot.chi1 = 0.8;
  pot.chi2 = -0.5;
  auto dirs = stiefel::random_state(4, 63);
  pot.gamma1 = dirs.e1;
  pot.gamma2 = dirs.e2;
  for (double eta : {0.0, 0.5}) {
    auto s = stiefel::random_state(4, 64);
    PhaseVelocity v = stiefel::natural_field(1.0, pot, s, eta);
    Mat phi = phi_eta(s, eta);
    double spin = psi_of(s) - eta;
    CHECK((v.de1 - (phi * s.e1 - spin * s.e2)).norm() < 1e-12);
    CHECK((v.de2 - (phi * s.e2 + spin * s.e1)).norm() < 1e-12);
  }
}

TEST_CASE("rank-3 family gradients match finite differences") {
  QuadBParams b{1.4, 0.9, 0.5, 0.2, -0.1, 0.15};
  auto sys = stiefel::quad_b_system(b);
  auto fd = stiefel::finite_difference_system(sys.value);
  for (std::uint64_t seed = 70; seed <= 72; ++seed) {
    auto s = stiefel::random_state(3, seed);
    auto ga = sys.gradient(s);
    auto gn = fd.gradient(s);
    CHECK((ga.e1 - gn.e1).norm() < 1e-6);
    CHECK((ga.e2 - gn.e2).norm() < 1e-6);
    CHECK((ga.p1 - gn.p1).norm() < 1e-6);
    CHECK((ga.p2 - gn.p2).norm() < 1e-6);
  }
}

TEST_CASE("time reversal: flipping momenta and the magnetic term") {
  QuadAParams a{1.3, 0.8, 0.2, 0.4};
  for (std::uint64_t seed = 80; seed <= 81; ++seed) {
    auto s = stiefel::random_state(4, seed);
    auto flipped = s;
    flipped.p1 = -s.p1;
    flipped.p2 = -s.p2;
    PhaseVelocity v = stiefel::riemannian_field(a, {}, s, 0.5);
    PhaseVelocity w = stiefel::riemannian_field(a, {}, flipped, -0.5);
    CHECK((w.de1 + v.de1).norm() < 1e-12);
    CHECK((w.de2 + v.de2).norm() < 1e-12);
    CHECK((w.dp1 - v.dp1).norm() < 1e-12);
    CHECK((w.dp2 - v.dp2).norm() < 1e-12);
  }
}

TEST_CASE("generic field edge cases") {
  // A constant Hamiltonian produces the zero field with zero multipliers.
  stiefel::HamiltonianSystem constant;
  constant.value = [](const CotangentState&) { return 3.7; };
  constant.gradient = [](const CotangentState& s) {
    auto n = s.n();
    return stiefel::Gradients{Vec::Zero(n), Vec::Zero(n), Vec::Zero(n),
                              Vec::Zero(n)};
  };
  auto s = stiefel::random_state(4, 90);
  PhaseVelocity v = stiefel::generic_field(constant, s, 0.5);
  CHECK(v.de1.norm() + v.de2.norm() + v.dp1.norm() + v.dp2.norm() < 1e-12);
  CHECK(std::abs(v.mu12) + std::abs(v.lambda11) < 1e-12);

  // A collapsed frame makes the multiplier system singular.
  CotangentState bad = CotangentState::Zero(3);
  bad.e1 = unit(3, 0);
  bad.e2 = unit(3, 0);
  bad.p1 = unit(3, 1);
  bad.p2 = unit(3, 2);
  auto sys = stiefel::quad_a_system(QuadAParams{1, 1, 0, 0}, {});
  CHECK_THROWS_AS((void)stiefel::generic_field(sys, bad, 0.0),
                  std::runtime_error);
}

TEST_CASE("assembling with stale multipliers breaks tangency") {
  // Keep the multipliers of the horizontal sub-Riemannian field but feed
  // gradients of a Hamiltonian nudged off the a1 + a2 = 2 a3 surface: with
  // a magnetic term present, the constraint derivatives pick up a first-order
  // error.  (The matching gradients stay exactly tangent.)
  SubRHParams sh{1.0, 1.0, 0.0};
  double eta = 0.5;
  auto s = stiefel::random_state(4, 91);
  PhaseVelocity v = stiefel::subr_h_field(sh, s, eta);
  stiefel::Multipliers kept{v.mu11,     v.mu12,     v.mu22,
                            v.lambda11, v.lambda12, v.lambda22};

  auto honest = stiefel::quad_a_system(QuadAParams{1, 1, 1, 0}, {});
  PhaseVelocity same = stiefel::assemble_hstar(s, honest.gradient(s), eta,
                                               kept);
  CHECK(max_constraint_derivative(s, same) < 1e-12);

  auto bent =
      stiefel::quad_a_system(QuadAParams{1, 1, 1 - 1e-3, 0}, {});
  PhaseVelocity off = stiefel::assemble_hstar(s, bent.gradient(s), eta, kept);
  CHECK(max_constraint_derivative(s, off) > 1e-6);
}

TEST_CASE("validate_flow rejects ill-formed specifications") {
  FlowSpec ok;
  ok.n = 4;
  ok.eta = 0.3;
  ok.family = RiemannianAFlow{QuadAParams{1.3, 0.8, 0.2, 0.4}, {}};
  CHECK_NOTHROW(stiefel::validate_flow(ok));

  FlowSpec wrong_n;
  wrong_n.n = 4;
  wrong_n.family = SO3QuadBFlow{QuadBParams{}};
  CHECK_THROWS_AS(stiefel::validate_flow(wrong_n), std::invalid_argument);

  FlowSpec bad_metric;
  bad_metric.n = 4;
  bad_metric.family = RiemannianAFlow{QuadAParams{1, 1, 0, 1.5}, {}};
  CHECK_THROWS_AS(stiefel::validate_flow(bad_metric), std::invalid_argument);

  FlowSpec not_skew;
  not_skew.n = 4;
  not_skew.family = NaturalFlow{0.7, stiefel::PendulumIPotential{
                                         Mat::Identity(4, 4)}};
  CHECK_THROWS_AS(stiefel::validate_flow(not_skew), std::invalid_argument);

  FlowSpec wrong_size;
  wrong_size.n = 4;
  wrong_size.family = NaturalFlow{0.7, stiefel::PendulumIPotential{
                                           random_skew(3, 5)}};
  CHECK_THROWS_AS(stiefel::validate_flow(wrong_size), std::invalid_argument);

  stiefel::PendulumIIPotential long_gamma;
  long_gamma.chi1 = 1.0;
  long_gamma.gamma1 = 2.0 * unit(4, 2);
  long_gamma.gamma2 = unit(4, 3);
  FlowSpec not_unit;
  not_unit.n = 4;
  not_unit.family = NaturalFlow{1.0, long_gamma};
  CHECK_THROWS_AS(stiefel::validate_flow(not_unit), std::invalid_argument);
}

TEST_CASE("dispatch helpers agree with the direct calls") {
  auto s = stiefel::random_state(3, 95);

  FlowSpec flow;
  flow.n = 3;
  flow.eta = 0.4;
  flow.family = SO3QuadBFlow{QuadBParams{1.4, 0.9, 0.5, 0.2, -0.1, 0.15}};
  PhaseVelocity direct = stiefel::so3_quadb_field(
      QuadBParams{1.4, 0.9, 0.5, 0.2, -0.1, 0.15}, s, 0.4);
  CHECK(field_gap(stiefel::evaluate_field(flow, s), direct) < 1e-15);

  auto fn = stiefel::field_function(flow);
  CHECK(field_gap(fn(s), direct) < 1e-15);

  CHECK(stiefel::flow_hamiltonian(flow, s) ==
        doctest::Approx(stiefel::hamiltonian(
            QuadBParams{1.4, 0.9, 0.5, 0.2, -0.1, 0.15}, {}, s)));

  FlowSpec nat;
  nat.n = 4;
  nat.eta = 0.2;
  nat.family = NaturalFlow{0.7, {}};
  auto s4 = stiefel::random_state(4, 96);
  CHECK(field_gap(stiefel::evaluate_field(nat, s4),
                  stiefel::natural_field(0.7, {}, s4, 0.2)) < 1e-15);

  FlowSpec invalid;
  invalid.n = 4;
  invalid.family = SO3QuadBFlow{QuadBParams{}};
  CHECK_THROWS_AS((void)stiefel::field_function(invalid),
                  std::invalid_argument);
}
