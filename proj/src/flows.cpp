// SPDX-License-Identifier: Apache-2.0

#include "stiefel/flows.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "stiefel/algebra.hpp"
#include "stiefel/integrals.hpp"

namespace stiefel {

void validate_flow(const FlowSpec& flow) {
  require(flow.n >= 3, "flow.n: dimension must be >= 3");
  auto check = [](const MetricParams& mp) {
    Admissibility adm = check_admissible(mp);
    require(adm.cls != MetricClass::Invalid,
            "flow parameters inadmissible: " + adm.reason);
  };
  if (const auto* r = std::get_if<RiemannianAFlow>(&flow.family)) {
    check(MetricParams{r->a});
    validate_potential(r->potential, flow.n);
  } else if (const auto* b = std::get_if<SO3QuadBFlow>(&flow.family)) {
    require(flow.n == 3, "rank-3 metric family requires n = 3");
    check(MetricParams{b->b});
  } else if (const auto* sh = std::get_if<SubRHFlow>(&flow.family)) {
    check(MetricParams{sh->a});
  } else if (const auto* sd = std::get_if<SubRD0Flow>(&flow.family)) {
    check(MetricParams{sd->a});
  } else {
    const auto& nf = std::get<NaturalFlow>(flow.family);
    check(MetricParams{NuKappaParams{1.0, nf.kappa}});
    validate_potential(nf.potential, flow.n);
  }
}

/* --------------------------------------------------- Hamiltonian machinery */

HamiltonianSystem quad_a_system(const QuadAParams& a,
                                const PotentialSpec& pot) {
  return {
      [a, pot](const CotangentState& s) {
        return hamiltonian(MetricParams{a}, pot, s);
      },
      [a, pot](const CotangentState& s) {
        Gradients g;
        double e1p2 = s.e1.dot(s.p2), e2p1 = s.e2.dot(s.p1);
        g.e1 = a.a3 * e2p1 * s.p2;
        g.e2 = a.a3 * e1p2 * s.p1;
        g.p1 = a.a1 * s.p1 + a.a3 * e1p2 * s.e2 + a.a4 * s.p2;
        g.p2 = a.a2 * s.p2 + a.a3 * e2p1 * s.e1 + a.a4 * s.p1;
        auto [v1, v2] = potential_gradient(pot, s);
        g.e1 += v1;
        g.e2 += v2;
        return g;
      },
  };
}

HamiltonianSystem quad_b_system(const QuadBParams& b) {
  return {
      [b](const CotangentState& s) {
        return hamiltonian(MetricParams{b}, PotentialSpec{}, s);
      },
      [b](const CotangentState& s) {
        require(s.n() == 3, "rank-3 metric family requires n = 3");
        using V3 = Eigen::Vector3d;
        V3 e1 = s.e1, e2 = s.e2, p1 = s.p1, p2 = s.p2;
        V3 e3 = e1.cross(e2);
        double u = p1.dot(e3), v = p2.dot(e3);
        double w = e1.dot(p2) - e2.dot(p1);
        double Hu = b.b1 * u + b.b4 * v + b.b5 * w;
        double Hv = b.b2 * v + b.b4 * u + b.b6 * w;
        double Hw = b.b3 * w + b.b5 * u + b.b6 * v;
        Gradients g;
        g.p1 = Hu * e3 - Hw * e2;
        g.p2 = Hv * e3 + Hw * e1;
        g.e1 = Hu * e2.cross(p1) + Hv * e2.cross(p2) + Hw * p2;
        g.e2 = Hu * p1.cross(e1) + Hv * p2.cross(e1) - Hw * p1;
        return g;
      },
  };
}

HamiltonianSystem subr_h_system(const SubRHParams& a) {
  return quad_a_system({a.a1, a.a2, (a.a1 + a.a2) / 2, a.a4},
                       PotentialSpec{});
}

HamiltonianSystem subr_d0_system(const SubRD0Params& a) {
  return quad_a_system({a.a1, 0.0, a.a3, 0.0}, PotentialSpec{});
}

HamiltonianSystem natural_system(double kappa, const PotentialSpec& pot) {
  return quad_a_system({1.0, 1.0, -(1.0 + 2.0 * kappa), 0.0}, pot);
}

HamiltonianSystem flow_system(const FlowSpec& flow) {
  if (const auto* r = std::get_if<RiemannianAFlow>(&flow.family))
    return quad_a_system(r->a, r->potential);
  if (const auto* b = std::get_if<SO3QuadBFlow>(&flow.family))
    return quad_b_system(b->b);
  if (const auto* sh = std::get_if<SubRHFlow>(&flow.family))
    return subr_h_system(sh->a);
  if (const auto* sd = std::get_if<SubRD0Flow>(&flow.family))
    return subr_d0_system(sd->a);
  const auto& nf = std::get<NaturalFlow>(flow.family);
  return natural_system(nf.kappa, nf.potential);
}

HamiltonianSystem finite_difference_system(
    std::function<double(const CotangentState&)> value, double step) {
  auto grad = [value, step](const CotangentState& s) {
    Gradients g;
    Eigen::Index n = s.n();
    g.e1.setZero(n);
    g.e2.setZero(n);
    g.p1.setZero(n);
    g.p2.setZero(n);
    CotangentState sp = s, sm = s;
    Vec* in[4] = {&sp.e1, &sp.e2, &sp.p1, &sp.p2};
    Vec* im[4] = {&sm.e1, &sm.e2, &sm.p1, &sm.p2};
    Vec* out[4] = {&g.e1, &g.e2, &g.p1, &g.p2};
    for (int blk = 0; blk < 4; ++blk) {
      for (Eigen::Index i = 0; i < n; ++i) {
        double orig = (*in[blk])[i];
        (*in[blk])[i] = orig + step;
        (*im[blk])[i] = orig - step;
        (*out[blk])[i] = (value(sp) - value(sm)) / (2 * step);
        (*in[blk])[i] = orig;
        (*im[blk])[i] = orig;
      }
    }
    return g;
  };
  return {std::move(value), std::move(grad)};
}

HamiltonianSystem casimir_system(int power, double eta) {
  require(power == 2 || power == 4, "casimir_system: power must be 2 or 4");
  auto value = [power, eta](const CotangentState& s) {
    Mat phi = momentum_map(s, eta);
    return trace_power(phi, power);
  };
  // For G = tr(Phi^k) the chain rule through the rank-structure of Phi
  // gives gradients in terms of P = 2k Phi^{k-1} applied to the columns.
  auto grad = [power, eta](const CotangentState& s) {
    Mat phi = momentum_map(s, eta);
    Mat P;
    if (power == 2)
      P = 4.0 * phi;
    else
      P = 8.0 * (phi * phi * phi).eval();
    Gradients g;
    g.e1 = P * s.p1 - eta * (P * s.e2);
    g.e2 = P * s.p2 + eta * (P * s.e1);
    g.p1 = -(P * s.e1);
    g.p2 = -(P * s.e2);
    return g;
  };
  return {std::move(value), std::move(grad)};
}

/* ----------------------------------------------------------- generic field */

PhaseVelocity assemble_hstar(const CotangentState& s, const Gradients& g,
                             double eta, const Multipliers& m) {
  PhaseVelocity v;
  v.de1 = g.p1 - m.mu11 * s.e1 - m.mu12 * s.e2;
  v.de2 = g.p2 - m.mu12 * s.e1 - m.mu22 * s.e2;
  v.dp1 = -g.e1 + eta * g.p2 - eta * (m.mu12 * s.e1 + m.mu22 * s.e2) +
          m.lambda11 * s.e1 + m.lambda12 * s.e2 + m.mu11 * s.p1 +
          m.mu12 * s.p2;
  v.dp2 = -g.e2 - eta * g.p1 + eta * (m.mu11 * s.e1 + m.mu12 * s.e2) +
          m.lambda12 * s.e1 + m.lambda22 * s.e2 + m.mu12 * s.p1 +
          m.mu22 * s.p2;
  v.mu11 = m.mu11;
  v.mu12 = m.mu12;
  v.mu22 = m.mu22;
  v.lambda11 = m.lambda11;
  v.lambda12 = m.lambda12;
  v.lambda22 = m.lambda22;
  return v;
}

std::array<double, 6> constraint_derivatives(const CotangentState& s,
                                             const PhaseVelocity& v) {
  return {
      2 * s.e1.dot(v.de1),
      2 * s.e2.dot(v.de2),
      s.e1.dot(v.de2) + s.e2.dot(v.de1),
      s.e1.dot(v.dp1) + v.de1.dot(s.p1),
      s.e2.dot(v.dp2) + v.de2.dot(s.p2),
      s.e1.dot(v.dp2) + v.de1.dot(s.p2) + s.e2.dot(v.dp1) + v.de2.dot(s.p1),
  };
}

PhaseVelocity generic_field(const HamiltonianSystem& sys,
                            const CotangentState& s, double eta) {
  Gradients g = sys.gradient(s);
  auto derivs = [&](const Multipliers& m) {
    auto d = constraint_derivatives(s, assemble_hstar(s, g, eta, m));
    return Eigen::Map<Eigen::Matrix<double, 6, 1>>(d.data()).eval();
  };
  Eigen::Matrix<double, 6, 1> base = derivs(Multipliers{});
  Eigen::Matrix<double, 6, 6> M;
  for (int j = 0; j < 6; ++j) {
    Multipliers m;
    double* slots[6] = {&m.mu11, &m.mu12, &m.mu22,
                        &m.lambda11, &m.lambda12, &m.lambda22};
    *slots[j] = 1.0;
    M.col(j) = derivs(m) - base;
  }
  Eigen::PartialPivLU<Eigen::Matrix<double, 6, 6>> lu(M);
  Eigen::Matrix<double, 6, 1> x = lu.solve(-base);
  if (!((M * x + base).norm() <= 1e-8 * std::max(1.0, base.norm()))) {
    Eigen::JacobiSVD<Eigen::Matrix<double, 6, 6>> svd(M);
    double cond = svd.singularValues()(0) /
                  std::max(svd.singularValues()(5), 1e-300);
    throw std::runtime_error(
        "multiplier system numerically singular (condition ~" +
        std::to_string(cond) + "); is the state on the manifold?");
  }
  Multipliers m{x(0), x(1), x(2), x(3), x(4), x(5)};
  return assemble_hstar(s, g, eta, m);
}

/* ------------------------------------------------------ closed-form fields */

namespace {

// For H = K + V(e) the potential enters the momentum equations and the
// frame multipliers additively; the frame equations and mu are untouched.
void apply_potential(PhaseVelocity& v, const PotentialSpec& pot,
                     const CotangentState& s) {
  if (!has_potential(pot)) return;
  auto [V1, V2] = potential_gradient(pot, s);
  double l11 = s.e1.dot(V1);
  double l12 = 0.5 * (s.e1.dot(V2) + s.e2.dot(V1));
  double l22 = s.e2.dot(V2);
  v.dp1 += -V1 + l11 * s.e1 + l12 * s.e2;
  v.dp2 += -V2 + l12 * s.e1 + l22 * s.e2;
  v.lambda11 += l11;
  v.lambda12 += l12;
  v.lambda22 += l22;
}

}  // namespace

PhaseVelocity riemannian_field(const QuadAParams& a, const PotentialSpec& pot,
                               const CotangentState& s, double eta) {
  const double a1 = a.a1, a2 = a.a2, a3 = a.a3, a4 = a.a4;
  const Vec &e1 = s.e1, &e2 = s.e2, &p1 = s.p1, &p2 = s.p2;
  double e1p2 = e1.dot(p2), e2p1 = e2.dot(p1);
  double P11 = p1.dot(p1), P22 = p2.dot(p2), P12 = p1.dot(p2);

  PhaseVelocity v;
  v.mu11 = a4 * e1p2;
  v.mu22 = a4 * e2p1;
  v.mu12 = 0.5 * (a1 * e2p1 + a2 * e1p2);
  v.de1 = a1 * p1 + a4 * p2 + a3 * e1p2 * e2 - v.mu11 * e1 - v.mu12 * e2;
  v.de2 = a2 * p2 + a4 * p1 + a3 * e2p1 * e1 - v.mu12 * e1 - v.mu22 * e2;
  v.lambda11 = (a2 - a1) * e1p2 * e2p1 - a1 * P11 - a4 * P12 -
               eta * ((a1 + a2) / 2 - a3) * e1p2;
  v.lambda12 = -2 * a4 * e1p2 * e2p1 - ((a1 + a2) / 2) * P12 -
               (a4 / 2) * (P11 + P22);
  v.lambda22 = (a1 - a2) * e1p2 * e2p1 - a2 * P22 - a4 * P12 +
               eta * ((a1 + a2) / 2 - a3) * e2p1;
  v.dp1 = -a3 * e2p1 * p2 + eta * v.de2 + v.mu11 * p1 + v.mu12 * p2 +
          v.lambda11 * e1 + v.lambda12 * e2;
  v.dp2 = -a3 * e1p2 * p1 - eta * v.de1 + v.mu12 * p1 + v.mu22 * p2 +
          v.lambda12 * e1 + v.lambda22 * e2;
  apply_potential(v, pot, s);
  return v;
}

PhaseVelocity so3_quadb_field(const QuadBParams& b, const CotangentState& s,
                              double eta) {
  require(s.n() == 3, "rank-3 metric family requires n = 3");
  return generic_field(quad_b_system(b), s, eta);
}

PhaseVelocity subr_h_field(const SubRHParams& a, const CotangentState& s,
                           double eta) {
  const double a1 = a.a1, a2 = a.a2, a4 = a.a4;
  const Vec &e1 = s.e1, &e2 = s.e2, &p1 = s.p1, &p2 = s.p2;
  double e1p2 = e1.dot(p2), e2p1 = e2.dot(p1);
  double P11 = p1.dot(p1), P22 = p2.dot(p2), P12 = p1.dot(p2);

  PhaseVelocity v;
  v.mu11 = a4 * e1p2;
  v.mu22 = a4 * e2p1;
  v.mu12 = 0.5 * (a1 * e2p1 + a2 * e1p2);
  v.de1 = a1 * p1 + a4 * p2 - a4 * e1p2 * e1 + a1 * e1p2 * e2;
  v.de2 = a2 * p2 + a4 * p1 + a2 * e2p1 * e1 - a4 * e2p1 * e2;
  v.lambda11 = (a2 - a1) * e1p2 * e2p1 - a1 * P11 - a4 * P12;
  v.lambda12 = -2 * a4 * e1p2 * e2p1 - ((a1 + a2) / 2) * P12 -
               (a4 / 2) * (P11 + P22);
  v.lambda22 = (a1 - a2) * e1p2 * e2p1 - a2 * P22 - a4 * P12;
  v.dp1 = -a2 * e2p1 * p2 + eta * v.de2 + a4 * e1p2 * p1 + v.lambda11 * e1 +
          v.lambda12 * e2;
  v.dp2 = -a1 * e1p2 * p1 - eta * v.de1 + a4 * e2p1 * p2 + v.lambda12 * e1 +
          v.lambda22 * e2;
  return v;
}

PhaseVelocity subr_d0_field(const SubRD0Params& a, const CotangentState& s,
                            double eta) {
  const double a1 = a.a1, a3 = a.a3;
  const Vec &e1 = s.e1, &e2 = s.e2, &p1 = s.p1, &p2 = s.p2;
  double e1p2 = e1.dot(p2), e2p1 = e2.dot(p1);
  double P11 = p1.dot(p1), P12 = p1.dot(p2);

  PhaseVelocity v;
  v.de1 = a1 * p1 + (a3 + a1 / 2) * e1p2 * e2;
  v.de2 = (a3 - a1 / 2) * e2p1 * e1;
  v.lambda11 = -a1 * e1p2 * e2p1 - a1 * P11 - eta * (a3 - a1 / 2) * e2p1;
  v.lambda12 = -(a1 / 2) * P12;
  v.lambda22 = a1 * e1p2 * e2p1 + eta * (a3 - a1 / 2) * e1p2;
  v.dp1 = -(a3 - a1 / 2) * e2p1 * p2 + eta * v.de2 + v.lambda11 * e1 +
          v.lambda12 * e2;
  v.dp2 = -(a3 + a1 / 2) * e1p2 * p1 - eta * v.de1 + v.lambda12 * e1 +
          v.lambda22 * e2;
  return v;
}

PhaseVelocity natural_field(double kappa, const PotentialSpec& pot,
                            const CotangentState& s, double eta) {
  const double k2 = 1.0 + 2.0 * kappa;
  const Vec &e1 = s.e1, &e2 = s.e2, &p1 = s.p1, &p2 = s.p2;
  double e1p2 = e1.dot(p2), e2p1 = e2.dot(p1);

  PhaseVelocity v;
  v.de1 = p1 - k2 * e1p2 * e2;
  v.de2 = p2 - k2 * e2p1 * e1;
  v.lambda11 = -p1.dot(p1) - eta * e1p2 + eta * k2 * e2p1;
  v.lambda12 = -p1.dot(p2);
  v.lambda22 = -p2.dot(p2) + eta * e2p1 - eta * k2 * e1p2;
  v.dp1 = k2 * e2p1 * p2 + eta * v.de2 + v.lambda11 * e1 + v.lambda12 * e2;
  v.dp2 = k2 * e1p2 * p1 - eta * v.de1 + v.lambda12 * e1 + v.lambda22 * e2;
  apply_potential(v, pot, s);
  return v;
}

PhaseVelocity evaluate_field(const FlowSpec& flow, const CotangentState& s) {
  if (const auto* r = std::get_if<RiemannianAFlow>(&flow.family))
    return riemannian_field(r->a, r->potential, s, flow.eta);
  if (const auto* b = std::get_if<SO3QuadBFlow>(&flow.family))
    return so3_quadb_field(b->b, s, flow.eta);
  if (const auto* sh = std::get_if<SubRHFlow>(&flow.family))
    return subr_h_field(sh->a, s, flow.eta);
  if (const auto* sd = std::get_if<SubRD0Flow>(&flow.family))
    return subr_d0_field(sd->a, s, flow.eta);
  const auto& nf = std::get<NaturalFlow>(flow.family);
  return natural_field(nf.kappa, nf.potential, s, flow.eta);
}

double flow_hamiltonian(const FlowSpec& flow, const CotangentState& s) {
  if (const auto* r = std::get_if<RiemannianAFlow>(&flow.family))
    return hamiltonian(MetricParams{r->a}, r->potential, s);
  if (const auto* b = std::get_if<SO3QuadBFlow>(&flow.family))
    return hamiltonian(MetricParams{b->b}, PotentialSpec{}, s);
  if (const auto* sh = std::get_if<SubRHFlow>(&flow.family))
    return hamiltonian(MetricParams{sh->a}, PotentialSpec{}, s);
  if (const auto* sd = std::get_if<SubRD0Flow>(&flow.family))
    return hamiltonian(MetricParams{sd->a}, PotentialSpec{}, s);
  const auto& nf = std::get<NaturalFlow>(flow.family);
  return hamiltonian(MetricParams{NuKappaParams{1.0, nf.kappa}}, nf.potential,
                     s);
}

std::function<PhaseVelocity(const CotangentState&)> field_function(
    const FlowSpec& flow) {
  validate_flow(flow);
  return [flow](const CotangentState& s) { return evaluate_field(flow, s); };
}

}  // namespace stiefel
