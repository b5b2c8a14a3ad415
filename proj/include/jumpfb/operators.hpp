// Copyright 2026 The jumpfb Authors
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

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "jumpfb/types.hpp"

namespace jumpfb {

/// Kronecker product a ⊗ b. The left factor indexes the slow (outer) block,
/// so for qubits `kron(a, b)` acts with `a` on atom 1.
template <typename A, typename B>
auto kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  using Scalar = typename A::Scalar;
  constexpr int ar = A::RowsAtCompileTime, ac = A::ColsAtCompileTime;
  constexpr int br = B::RowsAtCompileTime, bc = B::ColsAtCompileTime;
  constexpr int kRows = (ar == Eigen::Dynamic || br == Eigen::Dynamic) ? Eigen::Dynamic : ar * br;
  constexpr int kCols = (ac == Eigen::Dynamic || bc == Eigen::Dynamic) ? Eigen::Dynamic : ac * bc;
  Eigen::Matrix<Scalar, kRows, kCols> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Embeds two single-qubit operators as a two-qubit operator. Accepts
/// dynamically sized inputs and rejects anything that is not 2x2.
template <typename A, typename B>
OperatorT<typename A::RealScalar> qubit_kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2) {
    throw ConfigError("qubit_kron: both factors must be 2x2");
  }
  using Real = typename A::RealScalar;
  const QubitMatrix<Real> qa = a.template cast<Complex<Real>>();
  const QubitMatrix<Real> qb = b.template cast<Complex<Real>>();
  return kron(qa, qb);
}

/// |g><e| on a single atom, ordering [|g>, |e>].
template <typename Real = double>
QubitMatrix<Real> qubit_lowering() {
  QubitMatrix<Real> s = QubitMatrix<Real>::Zero();
  s(0, 1) = Real(1);
  return s;
}

/// σ + σ† on a single atom.
template <typename Real = double>
QubitMatrix<Real> qubit_sigma_x() {
  QubitMatrix<Real> s = qubit_lowering<Real>();
  return s + s.adjoint();
}

template <typename Real = double>
struct AtomicOperatorsT {
  OperatorT<Real> sigma1;
  OperatorT<Real> sigma2;
  OperatorT<Real> sigma1_dag;
  OperatorT<Real> sigma2_dag;
};

template <typename Real = double>
AtomicOperatorsT<Real> atomic_ops() {
  const QubitMatrix<Real> s = qubit_lowering<Real>();
  const QubitMatrix<Real> id = QubitMatrix<Real>::Identity();
  AtomicOperatorsT<Real> ops;
  ops.sigma1 = kron(s, id);
  ops.sigma2 = kron(id, s);
  ops.sigma1_dag = ops.sigma1.adjoint();
  ops.sigma2_dag = ops.sigma2.adjoint();
  return ops;
}

template <typename Real = double>
struct CollectiveOperatorsT {
  OperatorT<Real> j_minus;
  OperatorT<Real> j_plus;
  OperatorT<Real> j_x;  // J+ + J-, no factor 1/2
};

template <typename Real = double>
CollectiveOperatorsT<Real> collective_ops() {
  const auto atoms = atomic_ops<Real>();
  CollectiveOperatorsT<Real> ops;
  ops.j_minus = atoms.sigma1 + atoms.sigma2;
  ops.j_plus = ops.j_minus.adjoint();
  ops.j_x = ops.j_plus + ops.j_minus;
  return ops;
}

enum class FeedbackKind { None, Collective, Local };

/// Feedback unitary applied after each detected collective jump.
///   Collective: exp(-i λ J_x), via the eigendecomposition of J_x.
///   Local:      exp(-i λ σ_x) ⊗ I = (cos λ I - i sin λ σ_x) ⊗ I.
///   None:       identity.
template <typename Real = double>
OperatorT<Real> feedback_unitary(FeedbackKind kind, Real strength) {
  using std::cos;
  using std::sin;
  if (!std::isfinite(static_cast<double>(strength))) {
    throw ConfigError("feedback_unitary: feedback strength must be finite");
  }
  const Complex<Real> minus_i(Real(0), Real(-1));
  switch (kind) {
    case FeedbackKind::None:
      return OperatorT<Real>::Identity();
    case FeedbackKind::Collective: {
      if (strength == Real(0)) return OperatorT<Real>::Identity();
      const Eigen::SelfAdjointEigenSolver<OperatorT<Real>> eig(collective_ops<Real>().j_x);
      const auto& vecs = eig.eigenvectors();
      Eigen::Matrix<Complex<Real>, kDim, 1> phases;
      for (int k = 0; k < kDim; ++k) phases(k) = std::exp(minus_i * strength * eig.eigenvalues()(k));
      return vecs * phases.asDiagonal() * vecs.adjoint();
    }
    case FeedbackKind::Local: {
      const QubitMatrix<Real> u1 = cos(strength) * QubitMatrix<Real>::Identity() +
                                   minus_i * sin(strength) * qubit_sigma_x<Real>();
      return kron(u1, QubitMatrix<Real>::Identity());
    }
  }
  throw ConfigError("feedback_unitary: unknown feedback kind");
}

/// Both feedback families make the Liouvillian π-periodic in the strength
/// (J_x has spectrum {0, 0, ±2}; U_1(λ + π) = -U_1(λ)). Returns the
/// representative in (-π/2, π/2].
inline double equivalent_strength(double strength) {
  constexpr double pi = std::numbers::pi;
  double r = std::remainder(strength, pi);  // [-π/2, π/2]
  if (r <= -pi / 2) r += pi;
  return r;
}

/// Columns |1>=|gg>, |2>=(|ge>+|eg>)/√2, |3>=|ee>, |4>=(|ge>-|eg>)/√2.
template <typename Real = double>
OperatorT<Real> dicke_basis() {
  using std::sqrt;
  const Real h = Real(1) / sqrt(Real(2));
  OperatorT<Real> u = OperatorT<Real>::Zero();
  u(0, 0) = Real(1);
  u(1, 1) = h;
  u(2, 1) = h;
  u(3, 2) = Real(1);
  u(1, 3) = h;
  u(2, 3) = -h;
  return u;
}

/// Density matrix expressed in the Dicke basis: U† ρ U.
template <typename Derived>
auto to_dicke(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  const OperatorT<Real> u = dicke_basis<Real>();
  return OperatorT<Real>(u.adjoint() * rho * u);
}

template <typename Derived>
auto from_dicke(const Eigen::MatrixBase<Derived>& rho_dicke) {
  using Real = typename Derived::RealScalar;
  const OperatorT<Real> u = dicke_basis<Real>();
  return OperatorT<Real>(u * rho_dicke * u.adjoint());
}

// Named pure states used throughout.
template <typename Real = double>
StateVectorT<Real> ket_gg() {
  return StateVectorT<Real>::Unit(0);
}

template <typename Real = double>
StateVectorT<Real> ket_ee() {
  return StateVectorT<Real>::Unit(3);
}

/// Antisymmetric Bell state |4> = (|ge> - |eg>)/√2.
template <typename Real = double>
StateVectorT<Real> ket_singlet() {
  return dicke_basis<Real>().col(3);
}

/// Symmetric one-excitation state |2> = (|ge> + |eg>)/√2.
template <typename Real = double>
StateVectorT<Real> ket_symmetric() {
  return dicke_basis<Real>().col(1);
}

template <typename Derived>
auto projector(const Eigen::MatrixBase<Derived>& psi) {
  using Real = typename Derived::RealScalar;
  return OperatorT<Real>(psi * psi.adjoint());
}

}  // namespace jumpfb
