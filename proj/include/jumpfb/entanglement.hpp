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

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "jumpfb/operators.hpp"

namespace jumpfb {

// Eigenvalues of ρ below this are treated as an invalid state, not rounding.
inline constexpr double kPositivityTolerance = 1e-8;

/// Hermitizes ρ, clips small negative eigenvalues to zero and renormalizes
/// the trace. Returns the eigen-decomposition of the repaired state.
template <typename Derived>
auto physical_eigensystem(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  const OperatorT<Real> h = (rho + rho.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<OperatorT<Real>> eig(h);
  Eigen::Matrix<Real, kDim, 1> w = eig.eigenvalues();
  if (w.minCoeff() < -Real(kPositivityTolerance)) {
    throw NumericalError("density matrix has a negative eigenvalue below -1e-8");
  }
  w = w.cwiseMax(Real(0));
  const Real total = w.sum();
  if (!(total > Real(0))) throw NumericalError("density matrix has zero trace");
  w /= total;
  return std::make_pair(w, OperatorT<Real>(eig.eigenvectors()));
}

/// σ_y ⊗ σ_y in the |gg>,|ge>,|eg>,|ee> basis.
template <typename Real = double>
OperatorT<Real> spin_flip() {
  OperatorT<Real> y = OperatorT<Real>::Zero();
  y(0, 3) = Real(-1);
  y(1, 2) = Real(1);
  y(2, 1) = Real(1);
  y(3, 0) = Real(-1);
  return y;
}

/// Wootters concurrence max(0, s1 - s2 - s3 - s4), where s_i² are the
/// eigenvalues of ρ (σy⊗σy) ρ* (σy⊗σy) in decreasing order.
///
/// The s_i are taken as singular values of √ρ (σy⊗σy) √ρ*, which is the
/// factor of the Hermitian form √ρ ρ̃ √ρ. This avoids square roots of
/// eigenvalues that rounding has pushed to ~1e-16.
template <typename Derived>
typename Derived::RealScalar concurrence(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  using std::sqrt;
  const auto [w, v] = physical_eigensystem(rho);
  const OperatorT<Real> sqrt_rho = v * w.cwiseSqrt().template cast<Complex<Real>>().asDiagonal() * v.adjoint();
  const OperatorT<Real> factor = sqrt_rho * spin_flip<Real>() * sqrt_rho.conjugate();
  const Eigen::JacobiSVD<OperatorT<Real>> svd(factor);
  const auto& s = svd.singularValues();  // decreasing
  const Real c = s(0) - s(1) - s(2) - s(3);
  return std::clamp(c, Real(0), Real(1));
}

/// <4|ρ|4> for the antisymmetric Bell state.
template <typename Derived>
typename Derived::RealScalar fidelity_to_singlet(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  const StateVectorT<Real> s = ket_singlet<Real>();
  return std::clamp(std::real(Complex<Real>(s.dot(rho * s))), Real(0), Real(1));
}

/// Tr(ρ²)
template <typename Derived>
typename Derived::RealScalar purity(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  const OperatorT<Real> m = rho;
  return std::real(Complex<Real>((m * m).trace()));
}

/// Half the sum of absolute eigenvalues of a - b.
template <typename DA, typename DB>
typename DA::RealScalar trace_distance(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using Real = typename DA::RealScalar;
  const OperatorT<Real> d = a - b;
  const OperatorT<Real> h = (d + d.adjoint()) / Real(2);
  const Eigen::SelfAdjointEigenSolver<OperatorT<Real>> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().sum() / Real(2);
}

template <typename Real = double>
struct MeasureReportT {
  Real concurrence = 0;
  Real fidelity_to_singlet = 0;
  Real purity = 0;
};

using MeasureReport = MeasureReportT<double>;

template <typename Derived>
auto measure(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  return MeasureReportT<Real>{concurrence(rho), fidelity_to_singlet(rho), purity(rho)};
}

}  // namespace jumpfb
