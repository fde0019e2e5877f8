// Copyright 2026 The percwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
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
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "percwalk/errors.hpp"

namespace percwalk {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Eigenpairs of a real symmetric matrix: eigenvalues ascending, eigenvectors
/// as orthonormal columns in the same order.
template <typename Scalar>
struct SpectralDecomposition {
  VectorX<Scalar> eigenvalues;
  MatrixX<Scalar> eigenvectors;

  Eigen::Index dim() const noexcept { return eigenvalues.size(); }
};

template <typename Scalar>
constexpr Scalar symmetry_tolerance() {
  return std::max(Scalar(1e-12), Scalar(64) * std::numeric_limits<Scalar>::epsilon());
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& a,
                  typename Derived::RealScalar tol = symmetry_tolerance<typename Derived::RealScalar>()) {
  if (a.rows() != a.cols()) return false;
  return a.rows() == 0 || (a - a.transpose()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
SpectralDecomposition<typename Derived::Scalar> decompose(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  static_assert(!Eigen::NumTraits<Scalar>::IsComplex, "decompose expects a real symmetric matrix");
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw InvalidArgument("decompose needs a non-empty square matrix");
  }
  if (!a.allFinite()) throw InvalidArgument("decompose: matrix has non-finite entries");
  if (!is_symmetric(a)) {
    throw InvalidArgument("decompose: matrix is not symmetric (max asymmetry " +
                          std::to_string(static_cast<double>((a - a.transpose()).cwiseAbs().maxCoeff())) + ")");
  }
  const MatrixX<Scalar> dense = a;
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("symmetric eigensolver did not converge on a " + std::to_string(dense.rows()) + "x" +
                           std::to_string(dense.cols()) + " matrix with Frobenius norm " +
                           std::to_string(static_cast<double>(dense.norm())));
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Q diag(eigenvalues) Q^T.
template <typename Scalar>
MatrixX<Scalar> reconstruct(const SpectralDecomposition<Scalar>& d) {
  return d.eigenvectors * d.eigenvalues.asDiagonal() * d.eigenvectors.transpose();
}

namespace detail {

template <typename Scalar>
void require_finite_time(Scalar t) {
  if (!std::isfinite(static_cast<double>(t))) throw InvalidArgument("time must be finite");
}

}  // namespace detail

/// exp(-i A t) = Q exp(-i diag t) Q^T. Real and imaginary parts are formed as
/// two real products, so unitarity rests only on the orthonormality of Q.
template <typename Scalar>
MatrixX<std::complex<Scalar>> unitary_exp(const SpectralDecomposition<Scalar>& d, Scalar t) {
  detail::require_finite_time(t);
  const auto& q = d.eigenvectors;
  const VectorX<Scalar> phase = d.eigenvalues * t;
  const MatrixX<Scalar> re = q * phase.array().cos().matrix().asDiagonal() * q.transpose();
  const MatrixX<Scalar> im = -(q * phase.array().sin().matrix().asDiagonal() * q.transpose());
  MatrixX<std::complex<Scalar>> u(d.dim(), d.dim());
  u.real() = re;
  u.imag() = im;
  return u;
}

/// exp(-i A t) psi without forming the matrix.
template <typename Scalar, typename Derived>
VectorX<std::complex<Scalar>> apply_unitary(const SpectralDecomposition<Scalar>& d, Scalar t,
                                            const Eigen::MatrixBase<Derived>& psi) {
  detail::require_finite_time(t);
  using Complex = std::complex<Scalar>;
  const VectorX<Complex> phases =
      (d.eigenvalues * t).unaryExpr([](Scalar x) { return std::polar(Scalar(1), -x); });
  const VectorX<Complex> coeffs = d.eigenvectors.transpose().template cast<Complex>() * psi;
  return d.eigenvectors.template cast<Complex>() * phases.cwiseProduct(coeffs);
}

/// Tolerance below which a Laplacian eigenvalue counts as non-negative.
template <typename Scalar>
constexpr Scalar laplacian_eigenvalue_floor() {
  return Scalar(-1e-9);
}

/// exp(-A t) for t >= 0 and A a graph Laplacian. Entries within round-off of
/// zero come out slightly negative and are clamped to 0.
template <typename Scalar>
MatrixX<Scalar> stochastic_exp(const SpectralDecomposition<Scalar>& d, Scalar t) {
  detail::require_finite_time(t);
  if (t < Scalar(0)) throw InvalidArgument("stochastic_exp needs t >= 0");
  if (d.dim() > 0 && d.eigenvalues.minCoeff() < laplacian_eigenvalue_floor<Scalar>()) {
    throw InvalidArgument("stochastic_exp: generator has a negative eigenvalue; not a Laplacian");
  }
  const auto& q = d.eigenvectors;
  const VectorX<Scalar> decay = (-d.eigenvalues * t).array().exp().matrix();
  MatrixX<Scalar> p = q * decay.asDiagonal() * q.transpose();
  return p.cwiseMax(Scalar(0));
}

}  // namespace percwalk
