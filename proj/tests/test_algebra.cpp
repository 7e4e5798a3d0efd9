// Unit tests for the skew-matrix algebra layer: wedge products, the
// invariant pairing <X, Y> = -1/2 tr(X Y), trace powers, and commutators.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "stiefel/algebra.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd unit(int n, int i) {
  VectorXd e = VectorXd::Zero(n);
  e[i] = 1.0;
  return e;
}

}  // namespace

TEST_CASE("wedge builds rank-two skew matrices") {
  const int n = 4;
  VectorXd e1 = unit(n, 0), e2 = unit(n, 1);

  MatrixXd W = stiefel::wedge(e1, e2);
  CHECK(W(0, 1) == doctest::Approx(1.0));
  CHECK(W(1, 0) == doctest::Approx(-1.0));
  CHECK((W + W.transpose()).norm() == doctest::Approx(0.0));

  // Off the (0,1) block everything vanishes.
  W(0, 1) = 0.0;
  W(1, 0) = 0.0;
  CHECK(W.norm() == doctest::Approx(0.0));

  // wedge(x, x) = 0 and antisymmetry in the arguments.
  VectorXd x = VectorXd::Random(n), y = VectorXd::Random(n);
  CHECK(stiefel::wedge(x, x).norm() == doctest::Approx(0.0));
  CHECK((stiefel::wedge(x, y) + stiefel::wedge(y, x)).norm() ==
        doctest::Approx(0.0));
}

TEST_CASE("pairing is the invariant inner product on skew matrices") {
  const int n = 4;
  VectorXd e1 = unit(n, 0), e2 = unit(n, 1), e3 = unit(n, 2);

  MatrixXd W12 = stiefel::wedge(e1, e2);
  MatrixXd W13 = stiefel::wedge(e1, e3);
  CHECK(stiefel::pairing(W12, W12) == doctest::Approx(1.0));
  CHECK(stiefel::pairing(W12, W13) == doctest::Approx(0.0));

  // e_i ^ e_j (i < j) is an orthonormal basis for the pairing.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
          double expected = (i == k && j == l) ? 1.0 : 0.0;
          CHECK(stiefel::pairing(stiefel::wedge(unit(n, i), unit(n, j)),
                                 stiefel::wedge(unit(n, k), unit(n, l))) ==
                doctest::Approx(expected));
        }

  // Symmetry and bilinearity on random skew matrices.
  MatrixXd A = MatrixXd::Random(n, n), B = MatrixXd::Random(n, n);
  A = (A - A.transpose()).eval();
  B = (B - B.transpose()).eval();
  CHECK(stiefel::pairing(A, B) == doctest::Approx(stiefel::pairing(B, A)));
  CHECK(stiefel::pairing(A, 2.0 * B + A) ==
        doctest::Approx(2.0 * stiefel::pairing(A, B) +
                        stiefel::pairing(A, A)));
}

TEST_CASE("trace powers of skew matrices") {
  const int n = 4;
  VectorXd e1 = unit(n, 0), e2 = unit(n, 1), e3 = unit(n, 2);

  CHECK(stiefel::trace_power(stiefel::wedge(e1, e2), 2) ==
        doctest::Approx(-2.0));
  CHECK(stiefel::trace_power(MatrixXd::Zero(n, n), 3) == doctest::Approx(0.0));

  // tr(M^2) for M = e3 ^ e1 + eta e1 ^ e2: the two planes share e1, and the
  // trace adds up to -2 (1 + eta^2).
  double eta = 0.7;
  MatrixXd M = stiefel::wedge(e3, e1) + eta * stiefel::wedge(e1, e2);
  CHECK(stiefel::trace_power(M, 2) == doctest::Approx(-2.0 * (1 + eta * eta)));

  // tr(M^2) = -2 <M, M> by definition of the pairing.
  MatrixXd A = MatrixXd::Random(n, n);
  A = (A - A.transpose()).eval();
  CHECK(stiefel::trace_power(A, 2) ==
        doctest::Approx(-2.0 * stiefel::pairing(A, A)));

  // Odd trace powers of a skew matrix vanish.
  CHECK(std::abs(stiefel::trace_power(A, 3)) < 1e-12);
  CHECK(std::abs(stiefel::trace_power(A, 5)) < 1e-12);

  // k = 1 is the plain trace.
  MatrixXd G = MatrixXd::Random(n, n);
  CHECK(stiefel::trace_power(G, 1) == doctest::Approx(G.trace()));
}

TEST_CASE("commutators") {
  const int n = 4;
  VectorXd e1 = unit(n, 0), e2 = unit(n, 1), e3 = unit(n, 2);

  MatrixXd A = MatrixXd::Random(n, n);
  CHECK(stiefel::commutator(MatrixXd::Identity(n, n), A).norm() ==
        doctest::Approx(0.0));
  CHECK(stiefel::commutator(A, A).norm() == doctest::Approx(0.0));

  // [e1 ^ e2, e2 ^ e3] = e1 ^ e3: composing the two plane rotations through
  // the shared axis e2 leaves the (1,3) plane.
  MatrixXd C = stiefel::commutator(stiefel::wedge(e1, e2),
                                   stiefel::wedge(e2, e3));
  CHECK((C - stiefel::wedge(e1, e3)).norm() == doctest::Approx(0.0));

  // The commutator of two skew matrices is skew.
  MatrixXd S = MatrixXd::Random(n, n), T = MatrixXd::Random(n, n);
  S = (S - S.transpose()).eval();
  T = (T - T.transpose()).eval();
  MatrixXd ST = stiefel::commutator(S, T);
  CHECK((ST + ST.transpose()).norm() < 1e-14);
}

TEST_CASE("ensure_skew symmetrizes within tolerance and rejects beyond it") {
  const int n = 3;
  MatrixXd A = MatrixXd::Random(n, n);
  A = (A - A.transpose()).eval();

  MatrixXd noisy = A;
  noisy(0, 1) += 1e-14;
  MatrixXd cleaned = stiefel::ensure_skew(noisy);
  CHECK((cleaned + cleaned.transpose()).norm() == doctest::Approx(0.0));
  CHECK((cleaned - A).norm() < 1e-13);

  MatrixXd bad = A;
  bad(0, 1) += 1e-3;
  CHECK_THROWS_AS((void)stiefel::ensure_skew(bad), std::invalid_argument);
  CHECK_NOTHROW((void)stiefel::ensure_skew(bad, 1e-2));
}

TEST_CASE("dimension mismatches are rejected") {
  VectorXd x = VectorXd::Random(3), y = VectorXd::Random(4);
  CHECK_THROWS_AS((void)stiefel::wedge(x, y), std::invalid_argument);

  MatrixXd A3 = MatrixXd::Zero(3, 3), A4 = MatrixXd::Zero(4, 4);
  MatrixXd R = MatrixXd::Zero(3, 4);
  CHECK_THROWS_AS((void)stiefel::pairing(A3, A4), std::invalid_argument);
  CHECK_THROWS_AS((void)stiefel::pairing(R, R), std::invalid_argument);
  CHECK_THROWS_AS((void)stiefel::commutator(A3, A4), std::invalid_argument);
  CHECK_THROWS_AS((void)stiefel::trace_power(R, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)stiefel::trace_power(A3, 0), std::invalid_argument);
  CHECK_THROWS_AS((void)stiefel::ensure_skew(R), std::invalid_argument);
}
