// Copyright 2026 The mpsqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

/// Small dense complex linear algebra used by every other module.
///
/// All routines are pure functions of their inputs. Wherever a factorization
/// has a gauge freedom (phases of singular vectors, of QR columns) the gauge is
/// fixed so that identical inputs give bit-identical outputs.
namespace mpsqc {

using Scalar = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Matrix4 = Eigen::Matrix4cd;

template <typename T>
using DenseMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

/// Numerical tolerances shared across the library.
struct Tolerances {
  double dependence = 1e-8;     // linear dependence cutoff in kernel completion
  double unitarity = 1e-10;     // accepted deviation of Q^dag Q from identity
  double equality = 1e-12;      // "equal" in exactness checks
  double branch_hazard = 1e-8;  // eigenphase distance from pi that is flagged
  double drift = 1e-9;          // gate re-unitarization trigger in optimization
};

inline constexpr Tolerances kTol{};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Counters for soft failures that do not abort a computation.
struct Diagnostics {
  int degenerate_polar = 0;  // closest_unitary called on an all-zero matrix
  int branch_hazards = 0;    // fractional power with an eigenphase near pi
};

template <typename T>
struct SvdResult {
  DenseMatrix<T> u;
  RealVector s;
  DenseMatrix<T> vh;  // V^dag
};

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
  }
}

inline std::string shape_string(Index rows, Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

}  // namespace detail

/// Thin SVD A = U diag(s) V^dag with singular values non-increasing.
///
/// Gauge: within each singular triple the entry of largest modulus of the left
/// vector (first such index on ties) is made real and non-negative, the phase
/// being moved onto the right vector.
template <typename Derived>
SvdResult<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& a) {
  using T = typename Derived::Scalar;
  detail::require_finite(a, "svd");
  SvdResult<T> out;
  if (a.rows() == 0 || a.cols() == 0) {
    out.u.resize(a.rows(), 0);
    out.vh.resize(0, a.cols());
    return out;
  }
  DenseMatrix<T> work = a;
  Eigen::BDCSVD<DenseMatrix<T>> dec(work, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw NumericalError("svd did not converge on a " +
                         detail::shape_string(a.rows(), a.cols()) + " matrix");
  }
  out.u = dec.matrixU();
  out.s = dec.singularValues();
  out.vh = dec.matrixV().adjoint();
  for (Index j = 0; j < out.u.cols(); ++j) {
    Index best = 0;
    double best_abs = -1.0;
    for (Index i = 0; i < out.u.rows(); ++i) {
      const double m = std::abs(out.u(i, j));
      if (m > best_abs) {
        best_abs = m;
        best = i;
      }
    }
    if (best_abs <= 0.0) continue;
    const T phase = out.u(best, j) / best_abs;
    out.u.col(j) *= Eigen::numext::conj(phase);
    out.u(best, j) = T(best_abs);
    out.vh.row(j) *= phase;
  }
  return out;
}

template <typename T>
struct QrResult {
  DenseMatrix<T> q;  // rows x k, orthonormal columns
  DenseMatrix<T> r;  // k x cols, upper triangular, real non-negative diagonal
};

/// Thin QR with k = min(rows, cols) and the diagonal of R made real
/// non-negative.
template <typename Derived>
QrResult<typename Derived::Scalar> qr(const Eigen::MatrixBase<Derived>& a) {
  using T = typename Derived::Scalar;
  detail::require_finite(a, "qr");
  const Index k = std::min(a.rows(), a.cols());
  DenseMatrix<T> work = a;
  Eigen::HouseholderQR<DenseMatrix<T>> dec(work);
  QrResult<T> out;
  out.q = dec.householderQ() * DenseMatrix<T>::Identity(a.rows(), k);
  out.r = dec.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
  for (Index j = 0; j < k; ++j) {
    const double m = std::abs(out.r(j, j));
    if (m == 0.0) continue;
    const T phase = out.r(j, j) / m;
    out.q.col(j) *= phase;
    out.r.row(j) *= std::conj(phase);
    out.r(j, j) = T(m);
  }
  return out;
}

/// Largest entry of |A^dag A - I|.
template <typename Derived>
double isometry_error(const Eigen::MatrixBase<Derived>& a) {
  using T = typename Derived::Scalar;
  const DenseMatrix<T> g = a.adjoint() * a;
  return (g - DenseMatrix<T>::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& a, double tol = kTol.unitarity) {
  return a.rows() == a.cols() && isometry_error(a) <= tol;
}

/// Unitary factor of the polar decomposition, i.e. the unitary W maximizing
/// Re tr(F W^dag). An all-zero F has no preferred factor; identity is returned
/// and the event is counted in `diag`.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> closest_unitary(const Eigen::MatrixBase<Derived>& f,
                                                      Diagnostics* diag = nullptr) {
  using T = typename Derived::Scalar;
  if (f.rows() != f.cols()) {
    throw std::invalid_argument("closest_unitary: matrix is " +
                                detail::shape_string(f.rows(), f.cols()) + ", not square");
  }
  detail::require_finite(f, "closest_unitary");
  if (f.cwiseAbs().maxCoeff() == 0.0) {
    if (diag) ++diag->degenerate_polar;
    return DenseMatrix<T>::Identity(f.rows(), f.cols());
  }
  const auto dec = svd(f);
  return dec.u * dec.vh;
}

/// V^r for unitary V, taking principal eigenphases in (-pi, pi].
///
/// Uses the complex Schur form, which is diagonal for normal matrices and keeps
/// an orthonormal eigenbasis inside degenerate eigenspaces.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> fractional_unitary_power(const Eigen::MatrixBase<Derived>& v,
                                                               double r,
                                                               Diagnostics* diag = nullptr) {
  using T = typename Derived::Scalar;
  if (!(r >= 0.0 && r <= 1.0)) {
    throw std::invalid_argument("fractional_unitary_power: exponent must lie in [0, 1]");
  }
  detail::require_finite(v, "fractional_unitary_power");
  if (!is_unitary(v, kTol.unitarity)) {
    throw std::invalid_argument("fractional_unitary_power: matrix is not unitary");
  }
  if (r == 0.0) return DenseMatrix<T>::Identity(v.rows(), v.cols());
  if (r == 1.0) return v;
  DenseMatrix<T> work = v;
  Eigen::ComplexSchur<DenseMatrix<T>> schur(work);
  if (schur.info() != Eigen::Success) {
    throw NumericalError("fractional_unitary_power: Schur decomposition failed on a " +
                         detail::shape_string(v.rows(), v.cols()) + " matrix");
  }
  const auto& w = schur.matrixU();
  const auto& t = schur.matrixT();
  Eigen::Matrix<T, Eigen::Dynamic, 1> powered(v.rows());
  bool hazard = false;
  for (Index j = 0; j < v.rows(); ++j) {
    double theta = std::arg(t(j, j));
    if (theta <= -std::numbers::pi) theta = std::numbers::pi;
    if (std::numbers::pi - std::abs(theta) < kTol.branch_hazard) hazard = true;
    powered(j) = std::polar(1.0, r * theta);
  }
  if (hazard && diag) ++diag->branch_hazards;
  return w * powered.asDiagonal() * w.adjoint();
}

/// Extends an isometry Q (rows >= cols, Q^dag Q = I) to a square unitary
/// [Q X]. The kernel basis X is built by orthonormalizing standard basis
/// vectors against the current columns in index order; candidates whose
/// residual norm falls below kTol.dependence are skipped.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> complete_isometry(const Eigen::MatrixBase<Derived>& q) {
  using T = typename Derived::Scalar;
  const Index n = q.rows();
  const Index m = q.cols();
  if (m > n) {
    throw std::invalid_argument("complete_isometry: " + detail::shape_string(n, m) +
                                " has more columns than rows");
  }
  detail::require_finite(q, "complete_isometry");
  if (isometry_error(q) > kTol.unitarity) {
    throw std::invalid_argument("complete_isometry: input is not an isometry");
  }
  DenseMatrix<T> u(n, n);
  u.leftCols(m) = q;
  Index filled = m;
  Eigen::Matrix<T, Eigen::Dynamic, 1> cand(n);
  for (Index i = 0; i < n && filled < n; ++i) {
    cand.setZero();
    cand(i) = T(1);
    // two Gram-Schmidt passes
    for (int pass = 0; pass < 2; ++pass) {
      for (Index c = 0; c < filled; ++c) {
        cand -= u.col(c) * u.col(c).dot(cand);
      }
    }
    const double nrm = cand.norm();
    if (nrm < kTol.dependence) continue;
    u.col(filled++) = cand / nrm;
  }
  if (filled != n) {
    throw NumericalError("complete_isometry: could not span the complement of a " +
                         detail::shape_string(n, m) + " isometry");
  }
  return u;
}

/// Matrix with i.i.d. standard normal real and imaginary parts.
inline Matrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      a(i, j) = Scalar(re, im);
    }
  }
  return a;
}

/// Q factor (positive-diagonal gauge) of a complex Gaussian square matrix.
inline Matrix random_unitary(Index dim, std::mt19937_64& rng) {
  return qr(gaussian_matrix(dim, dim, rng)).q;
}

}  // namespace mpsqc
