// SPDX-License-Identifier: Apache-2.0

#include "stiefel/verification.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "stiefel/algebra.hpp"
#include "stiefel/integrals.hpp"
#include "stiefel/rigidbody.hpp"

namespace stiefel {

std::vector<std::string> available_checks() {
  return {"constraints", "conservation", "lax_traces", "lax_residual",
          "oracle",      "involution",   "equivalence"};
}

namespace {

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

double field_norm(const PhaseVelocity& v) {
  return std::sqrt(v.de1.squaredNorm() + v.de2.squaredNorm() +
                   v.dp1.squaredNorm() + v.dp2.squaredNorm());
}

double field_diff(const PhaseVelocity& a, const PhaseVelocity& b) {
  return std::sqrt((a.de1 - b.de1).squaredNorm() +
                   (a.de2 - b.de2).squaredNorm() +
                   (a.dp1 - b.dp1).squaredNorm() +
                   (a.dp2 - b.dp2).squaredNorm());
}

bool flow_has_potential(const FlowSpec& flow) {
  if (const auto* r = std::get_if<RiemannianAFlow>(&flow.family))
    return has_potential(r->potential);
  if (const auto* nf = std::get_if<NaturalFlow>(&flow.family))
    return has_potential(nf->potential);
  return false;
}

// Shared integration across checks that need the scenario trajectory.
struct CheckContext {
  const Scenario& sc;
  std::optional<Trajectory> traj;
  std::optional<DiagnosticsReport> report;

  const Trajectory& trajectory() {
    if (!traj)
      traj = integrate(sc.flow, initial_state(sc), sc.integrator);
    return *traj;
  }
  const DiagnosticsReport& diagnostics() {
    if (!report)
      report = conservation_report(trajectory(), sc.flow, sc.lambdas);
    return *report;
  }
};

CheckResult check_constraints(CheckContext& ctx) {
  CheckResult r{"constraints", false, ""};
  const Trajectory& traj = ctx.trajectory();
  double worst = 0;
  for (const auto& res : traj.residuals)
    worst = std::max(worst, res.max_abs());
  r.pass = worst <= ctx.sc.tol.constraints;
  r.detail = "max residual " + sci(worst) + " vs " +
             sci(ctx.sc.tol.constraints);
  return r;
}

CheckResult check_conservation(CheckContext& ctx) {
  CheckResult r{"conservation", true, ""};
  const DiagnosticsReport& rep = ctx.diagnostics();
  double worst = 0;
  std::string worst_name = "-";
  for (const auto& d : rep.integrals) {
    if (!d.expected_conserved) continue;
    if (d.max_drift > worst) {
      worst = d.max_drift;
      worst_name = d.name;
    }
  }
  r.pass = worst <= ctx.sc.tol.conservation;
  r.detail = "worst drift " + sci(worst) + " (" + worst_name + ") vs " +
             sci(ctx.sc.tol.conservation);
  return r;
}

CheckResult check_lax_traces(CheckContext& ctx) {
  CheckResult r{"lax_traces", false, ""};
  LaxPairSpec spec = lax_pair_for(ctx.sc.flow);
  if (!spec.isospectral_expected) {
    r.detail = "flow carries no isospectral pair";
    return r;
  }
  const DiagnosticsReport& rep = ctx.diagnostics();
  double worst = 0;
  for (const auto& td : rep.lax_traces)
    worst = std::max(worst, td.max_drift);
  r.pass = worst <= ctx.sc.tol.lax_trace;
  r.detail = "worst trace drift " + sci(worst) + " vs " +
             sci(ctx.sc.tol.lax_trace);
  return r;
}

CheckResult check_lax_residual(CheckContext& ctx) {
  CheckResult r{"lax_residual", false, ""};
  LaxPairSpec spec = lax_pair_for(ctx.sc.flow);
  if (!spec.residual_expected) {
    r.detail = "flow carries no exact generator identity";
    return r;
  }
  // A short densely-sampled run; the bound scales with the sample spacing.
  IntegratorConfig cfg = ctx.sc.integrator;
  cfg.T = std::min(cfg.T, 2.0);
  cfg.record_stride = 1;
  Trajectory traj = integrate(ctx.sc.flow, initial_state(ctx.sc), cfg);
  auto residuals =
      lax_residual(traj, spec.build, spec.bracket, ctx.sc.lambdas);
  double worst = 0;
  for (double v : residuals) worst = std::max(worst, v);
  double bound =
      ctx.sc.tol.lax_residual_factor * traj.sample_dt * traj.sample_dt;
  r.pass = worst <= bound;
  r.detail = "max residual " + sci(worst) + " vs " + sci(bound);
  return r;
}

CheckResult check_oracle(CheckContext& ctx) {
  CheckResult r{"oracle", false, ""};
  const FlowSpec& flow = ctx.sc.flow;
  bool fd_mode = std::holds_alternative<SO3QuadBFlow>(flow.family);
  HamiltonianSystem sys = flow_system(flow);
  HamiltonianSystem reference =
      fd_mode ? finite_difference_system(sys.value) : sys;
  double tol = fd_mode ? std::max(ctx.sc.tol.oracle, 1e-6) : ctx.sc.tol.oracle;

  std::uint64_t seed = 90210;
  if (const auto* is = std::get_if<InitialSeed>(&ctx.sc.initial))
    seed = is->seed + 1;
  double worst = 0;
  for (int k = 0; k < 100; ++k) {
    CotangentState s = random_state(flow.n, seed + k);
    PhaseVelocity closed = evaluate_field(flow, s);
    PhaseVelocity generic = generic_field(reference, s, flow.eta);
    double rel =
        field_diff(closed, generic) / std::max(1.0, field_norm(generic));
    worst = std::max(worst, rel);
  }
  r.pass = worst <= tol;
  r.detail = std::string(fd_mode ? "vs finite-difference gradients, " : "") +
             "max relative deviation " + sci(worst) + " vs " + sci(tol);
  return r;
}

CheckResult check_involution(CheckContext& ctx) {
  CheckResult r{"involution", false, ""};
  const FlowSpec& flow = ctx.sc.flow;
  if (flow_has_potential(flow)) {
    r.detail = "involution proxy applies to zero-potential flows";
    return r;
  }
  CotangentState s0 = initial_state(ctx.sc);
  double eta = flow.eta;
  double h = ctx.sc.integrator.h;
  double T = std::min(ctx.sc.integrator.T, 5.0);
  HamiltonianSystem sys = flow_system(flow);
  double d1 = involution_check(
      casimir_system(2, eta),
      [&sys](const CotangentState& s) { return sys.value(s); }, eta, s0, T, h);
  double d2 = involution_check(sys, casimir_j2(eta), eta, s0, T, h);
  double worst = std::max(d1, d2);
  r.pass = worst <= ctx.sc.tol.involution;
  r.detail = "H along J1-flow " + sci(d1) + ", J2 along H-flow " + sci(d2) +
             " vs " + sci(ctx.sc.tol.involution);
  return r;
}

CheckResult check_equivalence(CheckContext& ctx) {
  CheckResult r{"equivalence", false, ""};
  const FlowSpec& flow = ctx.sc.flow;
  if (flow.n != 3) {
    r.detail = "body equivalence requires n = 3";
    return r;
  }
  EquivalenceReport rep;
  try {
    rep = equivalence_check(flow, initial_state(ctx.sc), ctx.sc.integrator.T,
                            ctx.sc.integrator.h);
  } catch (const std::invalid_argument& e) {
    r.detail = e.what();
    return r;
  }
  r.pass = rep.max_deviation <= ctx.sc.tol.equivalence &&
           rep.fourth_drift <= ctx.sc.tol.fourth_integral;
  r.detail = "max deviation " + sci(rep.max_deviation) + " vs " +
             sci(ctx.sc.tol.equivalence) + ", fourth integral drift " +
             sci(rep.fourth_drift) + " vs " + sci(ctx.sc.tol.fourth_integral);
  return r;
}

}  // namespace

std::vector<CheckResult> run_checks(
    const Scenario& sc, const std::function<void(const std::string&)>& log) {
  std::vector<std::string> names = sc.checks;
  if (names.empty()) names = {"constraints", "conservation"};

  auto known = available_checks();
  for (const auto& name : names) {
    bool ok = false;
    for (const auto& k : known) ok = ok || k == name;
    if (!ok) throw ScenarioError("verify.checks", "unknown check '" + name +
                                                      "'");
  }

  CheckContext ctx{sc, std::nullopt, std::nullopt};
  std::vector<CheckResult> results;
  for (const auto& name : names) {
    CheckResult r;
    if (name == "constraints")
      r = check_constraints(ctx);
    else if (name == "conservation")
      r = check_conservation(ctx);
    else if (name == "lax_traces")
      r = check_lax_traces(ctx);
    else if (name == "lax_residual")
      r = check_lax_residual(ctx);
    else if (name == "oracle")
      r = check_oracle(ctx);
    else if (name == "involution")
      r = check_involution(ctx);
    else
      r = check_equivalence(ctx);
    if (log)
      log(std::string(r.pass ? "PASS" : "FAIL") + "  " + r.name + ": " +
          r.detail);
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace stiefel
