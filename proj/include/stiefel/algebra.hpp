// SPDX-License-Identifier: Apache-2.0
//
// Small dense skew-symmetric matrix algebra used throughout the library:
// wedge products, the invariant pairing, trace powers, and commutators.
// All functions are expression-friendly free functions over Eigen types.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace stiefel {

/* ------------------------------------------------------------------ checks */

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Symmetrize a nominally skew matrix: X <- (X - X^T)/2.  The asymmetry must
// be below `tol` (in Frobenius norm, relative to the matrix scale).
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
ensure_skew(const Eigen::MatrixBase<Derived>& X, double tol = 1e-12) {
  require(X.rows() == X.cols(), "ensure_skew: matrix must be square");
  auto sym = ((X + X.transpose()) / 2).eval();
  double scale = std::max(1.0, X.norm());
  require(sym.norm() <= tol * scale,
          "ensure_skew: asymmetry " + std::to_string(sym.norm()) +
              " exceeds tolerance");
  return ((X - X.transpose()) / 2).eval();
}

/* -------------------------------------------------------------- operations */

// wedge(x, y) = x y^T - y x^T, a rank-<=2 skew matrix.
template <class D1, class D2>
Eigen::Matrix<typename D1::Scalar, Eigen::Dynamic, Eigen::Dynamic>
wedge(const Eigen::MatrixBase<D1>& x, const Eigen::MatrixBase<D2>& y) {
  require(x.cols() == 1 && y.cols() == 1 && x.rows() == y.rows(),
          "wedge: arguments must be column vectors of equal length");
  return x * y.transpose() - y * x.transpose();
}

// Invariant pairing <X, Y> = -1/2 tr(X Y) on skew matrices.
template <class D1, class D2>
typename D1::Scalar pairing(const Eigen::MatrixBase<D1>& X,
                            const Eigen::MatrixBase<D2>& Y) {
  require(X.rows() == X.cols() && Y.rows() == Y.cols() && X.rows() == Y.rows(),
          "pairing: matrices must be square of equal size");
  return typename D1::Scalar(-0.5) * (X * Y).trace();
}

// tr(M^k) by repeated multiplication (k >= 1); no eigendecomposition.
template <class Derived>
typename Derived::Scalar trace_power(const Eigen::MatrixBase<Derived>& M,
                                     int k) {
  require(M.rows() == M.cols(), "trace_power: matrix must be square");
  require(k >= 1, "trace_power: power must be >= 1");
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic,
                            Eigen::Dynamic>;
  Mat P = M;
  for (int i = 1; i < k; ++i) P = (P * M).eval();
  return P.trace();
}

// [A, B] = A B - B A.
template <class D1, class D2>
Eigen::Matrix<typename D1::Scalar, Eigen::Dynamic, Eigen::Dynamic>
commutator(const Eigen::MatrixBase<D1>& A, const Eigen::MatrixBase<D2>& B) {
  require(A.rows() == A.cols() && B.rows() == B.cols() && A.rows() == B.rows(),
          "commutator: matrices must be square of equal size");
  return A * B - B * A;
}

}  // namespace stiefel
