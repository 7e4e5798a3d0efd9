// SPDX-License-Identifier: Apache-2.0

#include "stiefel/integrals.hpp"

#include <cmath>
#include <stdexcept>

#include "stiefel/algebra.hpp"

namespace stiefel {

Mat momentum_map(const CotangentState& s, double eta) {
  return wedge(s.p1, s.e1) + wedge(s.p2, s.e2) + eta * wedge(s.e1, s.e2);
}

double psi(const CotangentState& s) {
  return s.e1.dot(s.p2) - s.e2.dot(s.p1);
}

CasimirValues casimirs(const Mat& phi) {
  return {trace_power(phi, 2), trace_power(phi, 4)};
}

std::vector<double> thimm_chain(const Mat& phi, Eigen::Index n) {
  require(phi.rows() == n && phi.cols() == n,
          "thimm_chain: matrix size does not match n");
  require(n >= 3, "thimm_chain: need n >= 3");
  std::vector<double> out;
  out.push_back(phi(0, 1));
  for (Eigen::Index k = 3; k <= n; ++k)
    out.push_back(trace_power(phi.topLeftCorner(k, k), 2));
  for (Eigen::Index m = 4; m <= n; ++m)
    out.push_back(trace_power(phi.topLeftCorner(m, m), 4));
  return out;
}

/* ---------------------------------------------------------------- Lax pairs */

LaxSample lax_grassmann(const CotangentState& s, double eta, const Mat& Xi,
                        double lam) {
  Eigen::Index n = s.n();
  require(Xi.rows() == n && Xi.cols() == n,
          "lax_grassmann: coupling matrix size does not match state");
  const std::complex<double> I(0.0, 1.0);
  Mat phi = momentum_map(s, eta);
  Mat plane = wedge(s.e1, s.e2);
  LaxSample out;
  out.lam = lam;
  out.L = lam * phi.cast<std::complex<double>>() +
          I * (plane - lam * lam * Xi).cast<std::complex<double>>().eval();
  out.A = phi.cast<std::complex<double>>() -
          (I * lam) * Xi.cast<std::complex<double>>().eval();
  return out;
}

LaxSample lax_stiefel(const CotangentState& s, double eta,
                      const PendulumIIPotential& pot, double lam) {
  Eigen::Index n = s.n();
  require(pot.gamma1.size() == n && pot.gamma2.size() == n,
          "lax_stiefel: potential directions do not match state dimension");
  double ps = psi(s);
  Mat phi = momentum_map(s, eta);
  Vec c1 = s.e1 + lam * lam * pot.chi1 * pot.gamma1;
  Vec c2 = s.e2 + lam * lam * pot.chi2 * pot.gamma2;

  Mat L = Mat::Zero(n + 2, n + 2);
  L.topLeftCorner(n, n) = -lam * phi;
  L.col(n).head(n) = c1;
  L.row(n).head(n) = -c1.transpose();
  L.col(n + 1).head(n) = c2;
  L.row(n + 1).head(n) = -c2.transpose();
  L(n, n + 1) = lam * (ps - eta);
  L(n + 1, n) = lam * (eta - ps);

  Mat A = Mat::Zero(n + 2, n + 2);
  A.topLeftCorner(n, n) = -phi;
  Vec b1 = lam * pot.chi1 * pot.gamma1;
  Vec b2 = lam * pot.chi2 * pot.gamma2;
  A.col(n).head(n) = b1;
  A.row(n).head(n) = -b1.transpose();
  A.col(n + 1).head(n) = b2;
  A.row(n + 1).head(n) = -b2.transpose();
  A(n, n + 1) = ps - eta;
  A(n + 1, n) = eta - ps;

  LaxSample out;
  out.lam = lam;
  out.L = L.cast<std::complex<double>>();
  out.A = A.cast<std::complex<double>>();
  return out;
}

LaxPairSpec lax_pair_for(const FlowSpec& flow) {
  double eta = flow.eta;
  Eigen::Index n = flow.n;
  auto grassmann = [eta, n](const Mat& Xi) {
    return [eta, Xi](const CotangentState& s, double lam) {
      return lax_grassmann(s, eta, Xi, lam);
    };
  };

  LaxPairSpec spec;
  spec.bracket = LaxBracket::AL;
  if (const auto* nf = std::get_if<NaturalFlow>(&flow.family)) {
    if (const auto* p2 = std::get_if<PendulumIIPotential>(&nf->potential)) {
      if (nf->kappa == 1.0) {
        PendulumIIPotential pot = *p2;
        spec.build = [eta, pot](const CotangentState& s, double lam) {
          return lax_stiefel(s, eta, pot, lam);
        };
        spec.bracket = LaxBracket::LA;
        spec.isospectral_expected = true;
        spec.residual_expected = true;
        return spec;
      }
      spec.build = grassmann(Mat::Zero(n, n));
      return spec;  // kappa != 1: no certificate expected
    }
    if (const auto* p1 = std::get_if<PendulumIPotential>(&nf->potential)) {
      spec.build = grassmann(p1->coupling);
    } else {
      spec.build = grassmann(Mat::Zero(n, n));
    }
    spec.isospectral_expected = true;
    spec.residual_expected = true;
    return spec;
  }
  if (const auto* r = std::get_if<RiemannianAFlow>(&flow.family)) {
    spec.build = grassmann(Mat::Zero(n, n));
    if (!has_potential(r->potential) && r->a.a1 == r->a.a2 && r->a.a4 == 0) {
      spec.isospectral_expected = true;
      spec.residual_expected = (r->a.a1 == 1.0);
    }
    return spec;
  }
  if (const auto* sh = std::get_if<SubRHFlow>(&flow.family)) {
    spec.build = grassmann(Mat::Zero(n, n));
    if (sh->a.a1 == sh->a.a2 && sh->a.a4 == 0) {
      spec.isospectral_expected = true;
      spec.residual_expected = (sh->a.a1 == 1.0);
    }
    return spec;
  }
  // Degenerate and rank-3 families carry no Lax certificate here.
  spec.build = grassmann(Mat::Zero(n, n));
  return spec;
}

std::vector<double> lax_residual(const Trajectory& traj,
                                 const LaxBuilder& builder, LaxBracket bracket,
                                 const std::vector<double>& lams) {
  std::size_t m = traj.states.size();
  require(m >= 3, "lax_residual: need at least 3 samples");
  require(std::isfinite(traj.sample_dt) && traj.sample_dt > 0,
          "lax_residual: uniform sample spacing required");
  double h = traj.sample_dt;
  std::vector<double> out;
  out.reserve(lams.size());
  for (double lam : lams) {
    std::vector<LaxSample> samples;
    samples.reserve(m);
    for (const auto& s : traj.states) samples.push_back(builder(s, lam));
    double worst = 0;
    for (std::size_t k = 1; k + 1 < m; ++k) {
      CMat fd = (samples[k + 1].L - samples[k - 1].L) / (2 * h);
      CMat br = bracket == LaxBracket::AL
                    ? commutator(samples[k].A, samples[k].L)
                    : commutator(samples[k].L, samples[k].A);
      worst = std::max(worst, (fd - br).norm());
    }
    out.push_back(worst);
  }
  return out;
}

/* ------------------------------------------------------------------ reports */

namespace {

double rel_drift(double value, double initial) {
  return std::abs(value - initial) / std::max(1.0, std::abs(initial));
}

}  // namespace

DiagnosticsReport conservation_report(const Trajectory& traj,
                                      const FlowSpec& flow,
                                      const std::vector<double>& lambdas) {
  require(!traj.states.empty(), "conservation_report: empty trajectory");
  DiagnosticsReport rep;
  Eigen::Index n = flow.n;
  bool zero_pot = true;
  if (const auto* r = std::get_if<RiemannianAFlow>(&flow.family))
    zero_pot = !has_potential(r->potential);
  else if (const auto* nf = std::get_if<NaturalFlow>(&flow.family))
    zero_pot = !has_potential(nf->potential);

  // Which flows keep the structure-group momentum Psi.
  bool psi_expected = false;
  if (const auto* r = std::get_if<RiemannianAFlow>(&flow.family))
    psi_expected = zero_pot && r->a.a1 == r->a.a2 && r->a.a4 == 0;
  else if (const auto* sh = std::get_if<SubRHFlow>(&flow.family))
    psi_expected = sh->a.a1 == sh->a.a2 && sh->a.a4 == 0;
  else if (const auto* b = std::get_if<SO3QuadBFlow>(&flow.family))
    psi_expected = b->b.b1 == b->b.b2 && b->b.b4 == 0 && b->b.b5 == 0 &&
                   b->b.b6 == 0;
  else if (const auto* nf = std::get_if<NaturalFlow>(&flow.family))
    psi_expected = !std::holds_alternative<PendulumIIPotential>(nf->potential);

  struct Entry {
    std::string name;
    std::function<double(const CotangentState&)> fn;
    bool expected;
  };
  std::vector<Entry> entries;
  entries.push_back({"H",
                     [&flow](const CotangentState& s) {
                       return flow_hamiltonian(flow, s);
                     },
                     true});
  entries.push_back({"Psi", [](const CotangentState& s) { return psi(s); },
                     psi_expected});
  double eta = flow.eta;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      entries.push_back({"Phi_" + std::to_string(i + 1) + std::to_string(j + 1),
                         [i, j, eta](const CotangentState& s) {
                           return momentum_map(s, eta)(i, j);
                         },
                         zero_pot});
  entries.push_back({"J1",
                     [eta](const CotangentState& s) {
                       return trace_power(momentum_map(s, eta), 2);
                     },
                     zero_pot});
  entries.push_back({"J2",
                     [eta](const CotangentState& s) {
                       return trace_power(momentum_map(s, eta), 4);
                     },
                     zero_pot});
  for (std::size_t k = 0; k < static_cast<std::size_t>(2 * n - 4); ++k)
    entries.push_back({"F" + std::to_string(k + 1),
                       [k, eta, n](const CotangentState& s) {
                         return thimm_chain(momentum_map(s, eta), n)[k];
                       },
                       zero_pot});

  for (auto& en : entries) {
    IntegralDrift d;
    d.name = en.name;
    d.expected_conserved = en.expected;
    d.initial = en.fn(traj.states.front());
    for (const auto& s : traj.states)
      d.max_drift = std::max(d.max_drift, rel_drift(en.fn(s), d.initial));
    rep.integrals.push_back(std::move(d));
  }

  LaxPairSpec lax = lax_pair_for(flow);
  if (lax.isospectral_expected) {
    for (double lam : lambdas) {
      for (int power : {2, 4}) {
        LaxTraceDrift td;
        td.lam = lam;
        td.power = power;
        std::complex<double> t0 =
            trace_power(lax.build(traj.states.front(), lam).L, power);
        for (const auto& s : traj.states) {
          std::complex<double> t = trace_power(lax.build(s, lam).L, power);
          td.max_drift = std::max(
              td.max_drift, std::abs(t - t0) / std::max(1.0, std::abs(t0)));
        }
        rep.lax_traces.push_back(td);
      }
    }
  }

  for (const auto& r : traj.residuals)
    rep.max_constraint_residual =
        std::max(rep.max_constraint_residual, r.max_abs());
  return rep;
}

double involution_check(const HamiltonianSystem& driver,
                        const std::function<double(const CotangentState&)>&
                            observable,
                        double eta, const CotangentState& s0, double T,
                        double h) {
  IntegratorConfig cfg;
  cfg.h = h;
  cfg.T = T;
  cfg.record_stride = 10;
  FieldFn field = [&driver, eta](const CotangentState& s) {
    return generic_field(driver, s, eta);
  };
  Trajectory traj = integrate(field, s0, cfg);
  double f0 = observable(traj.states.front());
  double worst = 0;
  for (const auto& s : traj.states)
    worst = std::max(worst, rel_drift(observable(s), f0));
  return worst;
}

std::function<double(const CotangentState&)> casimir_j1(double eta) {
  return [eta](const CotangentState& s) {
    return trace_power(momentum_map(s, eta), 2);
  };
}

std::function<double(const CotangentState&)> casimir_j2(double eta) {
  return [eta](const CotangentState& s) {
    return trace_power(momentum_map(s, eta), 4);
  };
}

}  // namespace stiefel
