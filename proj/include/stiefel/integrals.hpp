// SPDX-License-Identifier: Apache-2.0
//
// First integrals and their certificates: the magnetic momentum matrix,
// its trace invariants, the chain of partial-trace integrals, two Lax
// representations with spectral parameter, and drift/residual reports
// computed along trajectories.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "stiefel/flows.hpp"
#include "stiefel/integrate.hpp"
#include "stiefel/manifold.hpp"
#include "stiefel/potentials.hpp"

namespace stiefel {

using CMat = Eigen::MatrixXcd;

/* ----------------------------------------------------------- momentum maps */

// Magnetic momentum matrix Phi = p1 ^ e1 + p2 ^ e2 + eta e1 ^ e2.
Mat momentum_map(const CotangentState& s, double eta);

// The structure-group momentum Psi = <e1,p2> - <e2,p1>.
double psi(const CotangentState& s);

struct CasimirValues {
  double j1, j2;  // tr(Phi^2), tr(Phi^4)
};
CasimirValues casimirs(const Mat& phi);

// The commuting chain of partial-trace integrals for an n x n momentum
// matrix: the (0,1) entry, tr((Phi_k)^2) for leading k x k blocks
// k = 3..n, and tr((Phi_m)^4) for m = 4..n.  Length 2n - 4 for n >= 3.
std::vector<double> thimm_chain(const Mat& phi, Eigen::Index n);

/* ---------------------------------------------------------------- Lax pairs */

// A Lax matrix with the generator of its evolution, at one value of the
// spectral parameter.
struct LaxSample {
  double lam = 0;
  CMat L, A;
};

// n x n complex pair for plane-coupling (type-I) pendulum flows:
// L = lam Phi + i (e1^e2 - lam^2 Xi), A = Phi - i lam Xi, dL/dt = [A, L].
LaxSample lax_grassmann(const CotangentState& s, double eta, const Mat& Xi,
                        double lam);

// (n+2) x (n+2) real pair for the kappa = 1 two-direction (type-II)
// pendulum flow; dL/dt = [L, A].
LaxSample lax_stiefel(const CotangentState& s, double eta,
                      const PendulumIIPotential& pot, double lam);

using LaxBuilder =
    std::function<LaxSample(const CotangentState&, double lam)>;

enum class LaxBracket { AL, LA };  // dL/dt = [A,L] vs [L,A]

// Which Lax representation a flow carries and what is expected of it.
struct LaxPairSpec {
  LaxBuilder build;
  LaxBracket bracket = LaxBracket::AL;
  bool isospectral_expected = false;  // trace powers conserved
  bool residual_expected = false;     // dL/dt matches the bracket exactly
};
LaxPairSpec lax_pair_for(const FlowSpec& flow);

// Max over interior samples of ||(L(t+h)-L(t-h))/(2h) - bracket|| at each
// spectral parameter.  Requires at least 3 samples and uniform spacing.
std::vector<double> lax_residual(const Trajectory& traj,
                                 const LaxBuilder& builder,
                                 LaxBracket bracket,
                                 const std::vector<double>& lams);

/* ----------------------------------------------------------------- reports */

struct IntegralDrift {
  std::string name;
  double initial = 0;
  double max_drift = 0;  // |F(t)-F(0)| / max(1, |F(0)|)
  bool expected_conserved = false;
};

struct LaxTraceDrift {
  double lam = 0;
  int power = 0;
  double max_drift = 0;
};

struct DiagnosticsReport {
  std::vector<IntegralDrift> integrals;
  std::vector<LaxTraceDrift> lax_traces;
  double max_constraint_residual = 0;
};

// Evaluate every named integral (H, Psi, the Phi entries, the trace
// invariants, the partial-trace chain) along the trajectory, plus Lax trace
// powers when the flow carries an isospectral pair.
DiagnosticsReport conservation_report(
    const Trajectory& traj, const FlowSpec& flow,
    const std::vector<double>& lambdas = {0.5, 1.0, 2.0});

/* --------------------------------------------------------------- involution */

// Integrate the Hamiltonian flow of `driver` and report the max relative
// drift of `observable` along it; small drift certifies a vanishing bracket.
double involution_check(const HamiltonianSystem& driver,
                        const std::function<double(const CotangentState&)>&
                            observable,
                        double eta, const CotangentState& s0, double T,
                        double h);

// Trace-invariant observables bound to a magnetic strength.
std::function<double(const CotangentState&)> casimir_j1(double eta);
std::function<double(const CotangentState&)> casimir_j2(double eta);

}  // namespace stiefel
