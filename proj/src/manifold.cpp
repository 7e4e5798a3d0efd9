// SPDX-License-Identifier: Apache-2.0

#include "stiefel/manifold.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "stiefel/algebra.hpp"

namespace stiefel {

double ConstraintResidual::max_abs() const {
  double m = 0;
  for (double r : as_array()) m = std::max(m, std::abs(r));
  return m;
}

ConstraintResidual constraint_residuals(const CotangentState& s) {
  ConstraintResidual r;
  r.f11 = s.e1.dot(s.e1) - 1.0;
  r.f22 = s.e2.dot(s.e2) - 1.0;
  r.f12 = s.e1.dot(s.e2);
  r.g11 = s.e1.dot(s.p1);
  r.g22 = s.e2.dot(s.p2);
  r.g12 = s.e1.dot(s.p2) + s.e2.dot(s.p1);
  return r;
}

bool on_manifold(const CotangentState& s, double tol) {
  return constraint_residuals(s).max_abs() <= tol;
}

void require_on_manifold(const CotangentState& s, double tol) {
  ConstraintResidual r = constraint_residuals(s);
  double worst = r.max_abs();
  if (worst > tol) {
    static const char* names[6] = {"f11", "f22", "f12", "g11", "g22", "g12"};
    auto vals = r.as_array();
    int k = 0;
    for (int i = 1; i < 6; ++i)
      if (std::abs(vals[i]) > std::abs(vals[k])) k = i;
    throw std::invalid_argument("state off manifold: |" +
                                std::string(names[k]) + "| = " +
                                std::to_string(std::abs(vals[k])));
  }
}

double contact_form(const CotangentState& s, const TangentVector& xi) {
  return -s.e2.dot(xi.xi1);
}

TangentVector reeb_field(const CotangentState& s) {
  require_on_manifold(s);
  return {-s.e2, s.e1};
}

CotangentState rotate_so2(const CotangentState& s, double theta) {
  double c = std::cos(theta), sn = std::sin(theta);
  CotangentState out;
  out.e1 = c * s.e1 + sn * s.e2;
  out.e2 = -sn * s.e1 + c * s.e2;
  out.p1 = c * s.p1 + sn * s.p2;
  out.p2 = -sn * s.p1 + c * s.p2;
  return out;
}

TangentVector tangent_project(const CotangentState& s, const Vec& v1,
                              const Vec& v2) {
  // Remove normal components: self-directions fully, the mixed direction
  // split evenly between the two columns.
  double half12 = 0.5 * (s.e1.dot(v2) + s.e2.dot(v1));
  TangentVector t;
  t.xi1 = v1 - s.e1.dot(v1) * s.e1 - half12 * s.e2;
  t.xi2 = v2 - s.e2.dot(v2) * s.e2 - half12 * s.e1;
  return t;
}

Mat grassmann_plane(const CotangentState& s) {
  require_on_manifold(s);
  return wedge(s.e1, s.e2);
}

CotangentState random_state(Eigen::Index n, std::uint64_t seed,
                            double momentum_scale) {
  require(n >= 3, "random_state: dimension must be >= 3");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&] {
    Vec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
    return v;
  };

  CotangentState s;
  s.e1 = draw();
  s.e1.normalize();
  s.e2 = draw();
  s.e2 -= s.e1.dot(s.e2) * s.e1;
  s.e2.normalize();

  Vec q1 = momentum_scale * draw(), q2 = momentum_scale * draw();
  double half12 = 0.5 * (s.e1.dot(q2) + s.e2.dot(q1));
  s.p1 = q1 - s.e1.dot(q1) * s.e1 - half12 * s.e2;
  s.p2 = q2 - s.e2.dot(q2) * s.e2 - half12 * s.e1;
  return s;
}

}  // namespace stiefel
