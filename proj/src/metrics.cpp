// SPDX-License-Identifier: Apache-2.0

#include "stiefel/metrics.hpp"

#include <cmath>

#include "stiefel/algebra.hpp"

namespace stiefel {

namespace {

// Boundary detection scale: a1 + a2 = 2 a3 within this relative tolerance
// means the metric is the horizontal sub-Riemannian one, not Riemannian.
bool on_subr_boundary(const QuadAParams& a) {
  double scale = std::max({1.0, std::abs(a.a1), std::abs(a.a2),
                           std::abs(a.a3)});
  return std::abs(a.a1 + a.a2 - 2 * a.a3) <= 1e-12 * scale;
}

}  // namespace

Admissibility check_admissible(const MetricParams& params) {
  if (const auto* a = std::get_if<QuadAParams>(&params)) {
    if (!(a->a1 > 0 && a->a2 > 0))
      return {MetricClass::Invalid, "need a1 > 0 and a2 > 0"};
    if (!(a->a1 * a->a2 > a->a4 * a->a4))
      return {MetricClass::Invalid, "need a1 a2 > a4^2"};
    if (on_subr_boundary(*a)) return {MetricClass::SubRiemannianH, ""};
    if (!(a->a1 + a->a2 > 2 * a->a3))
      return {MetricClass::Invalid, "need a1 + a2 > 2 a3"};
    return {MetricClass::Riemannian, ""};
  }
  if (const auto* b = std::get_if<QuadBParams>(&params)) {
    // Positive definiteness of the quadratic form via leading minors.
    Eigen::Matrix3d A = quad_b_matrix(*b);
    double m1 = A(0, 0);
    double m2 = A.topLeftCorner<2, 2>().determinant();
    double m3 = A.determinant();
    if (!(m1 > 0 && m2 > 0 && m3 > 0))
      return {MetricClass::Invalid,
              "coefficient matrix must be positive definite"};
    return {MetricClass::Riemannian, ""};
  }
  if (const auto* nk = std::get_if<NuKappaParams>(&params)) {
    if (!(nk->nu > 0)) return {MetricClass::Invalid, "need nu > 0"};
    if (!(nk->kappa > -1)) return {MetricClass::Invalid, "need kappa > -1"};
    return {MetricClass::Riemannian, ""};
  }
  if (const auto* sh = std::get_if<SubRHParams>(&params)) {
    if (!(sh->a1 > 0 && sh->a2 > 0))
      return {MetricClass::Invalid, "need a1 > 0 and a2 > 0"};
    if (!(sh->a1 * sh->a2 > sh->a4 * sh->a4))
      return {MetricClass::Invalid, "need a1 a2 > a4^2"};
    return {MetricClass::SubRiemannianH, ""};
  }
  const auto& sd = std::get<SubRD0Params>(params);
  if (!(sd.a1 > 0)) return {MetricClass::Invalid, "need a1 > 0"};
  if (!(sd.a1 > 2 * sd.a3)) return {MetricClass::Invalid, "need a1 > 2 a3"};
  return {MetricClass::SubRiemannianD0, ""};
}

QuadAParams manakov_to_params(const ManakovData& d) {
  const auto& al = d.alpha;
  const auto& be = d.beta;
  require(std::abs(al[0] - al[1]) > 1e-12 &&
              std::abs(al[1] - al[2]) > 1e-12 &&
              std::abs(al[0] - al[2]) > 1e-12,
          "manakov: alpha entries must be pairwise distinct");
  double r1 = (be[0] - be[2]) / (al[0] - al[2]);
  double r2 = (be[1] - be[2]) / (al[1] - al[2]);
  double r3 = (be[0] - be[1]) / (al[0] - al[1]);
  require(r1 > 0 && r2 > 0 && r3 > 0,
          "manakov: difference ratios must all be positive");
  QuadAParams a;
  a.a1 = r1;
  a.a2 = r2;
  a.a3 = 0.5 * (r1 + r2) - 2 * r3;
  a.a4 = 0;
  return a;
}

QuadAParams quad_a_from_nu_kappa(const NuKappaParams& nk) {
  return {nk.nu, nk.nu, -nk.nu * (1 + 2 * nk.kappa), 0};
}

QuadBParams quad_b_from_quad_a(const QuadAParams& a) {
  return {a.a1, a.a2, (a.a1 + a.a2 - 2 * a.a3) / 4, a.a4, 0, 0};
}

Eigen::Matrix3d quad_b_matrix(const QuadBParams& b) {
  Eigen::Matrix3d A;
  A << b.b2, -b.b4, -b.b6,
      -b.b4, b.b1, b.b5,
      -b.b6, b.b5, b.b3;
  return A;
}

namespace {

double kinetic_quad_a(const QuadAParams& a, const CotangentState& s) {
  return 0.5 * a.a1 * s.p1.dot(s.p1) + 0.5 * a.a2 * s.p2.dot(s.p2) +
         a.a3 * s.p1.dot(s.e2) * s.p2.dot(s.e1) + a.a4 * s.p1.dot(s.p2);
}

double kinetic_quad_b(const QuadBParams& b, const CotangentState& s) {
  require(s.n() == 3, "rank-3 metric family requires n = 3");
  Eigen::Vector3d e3 = Eigen::Vector3d(s.e1).cross(Eigen::Vector3d(s.e2));
  double u = s.p1.dot(e3), v = s.p2.dot(e3);
  double w = s.e1.dot(s.p2) - s.e2.dot(s.p1);
  return 0.5 * b.b1 * u * u + 0.5 * b.b2 * v * v + 0.5 * b.b3 * w * w +
         b.b4 * u * v + b.b5 * w * u + b.b6 * w * v;
}

}  // namespace

double hamiltonian(const MetricParams& params, const PotentialSpec& pot,
                   const CotangentState& s) {
  double kin = 0;
  if (const auto* a = std::get_if<QuadAParams>(&params))
    kin = kinetic_quad_a(*a, s);
  else if (const auto* b = std::get_if<QuadBParams>(&params))
    kin = kinetic_quad_b(*b, s);
  else if (const auto* nk = std::get_if<NuKappaParams>(&params))
    kin = kinetic_quad_a(quad_a_from_nu_kappa(*nk), s);
  else if (const auto* sh = std::get_if<SubRHParams>(&params))
    kin = kinetic_quad_a({sh->a1, sh->a2, (sh->a1 + sh->a2) / 2, sh->a4}, s);
  else {
    const auto& sd = std::get<SubRD0Params>(params);
    kin = 0.5 * sd.a1 * s.p1.dot(s.p1) +
          sd.a3 * s.p1.dot(s.e2) * s.p2.dot(s.e1);
  }
  return kin + potential_value(pot, s);
}

double lagrangian_nu_kappa(const NuKappaParams& nk, const CotangentState& s,
                           const TangentVector& xi) {
  double nu = nk.nu, k = nk.kappa;
  return (xi.xi1.dot(xi.xi1) + xi.xi2.dot(xi.xi2)) / (2 * nu) +
         (1 + 2 * k) / (2 * nu * (1 + k)) * s.e1.dot(xi.xi2) *
             s.e2.dot(xi.xi1);
}

}  // namespace stiefel
