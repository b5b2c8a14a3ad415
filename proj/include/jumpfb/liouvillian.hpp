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

// Superoperators on column-stacked density matrices:
//   vec(A ρ B) = (Bᵀ ⊗ A) vec(ρ)

#include <string>
#include <utility>
#include <vector>

#include "jumpfb/config.hpp"
#include "jumpfb/operators.hpp"

namespace jumpfb {

template <typename Real = double>
struct SuperoperatorT {
  SuperMatrixT<Real> matrix = SuperMatrixT<Real>::Zero();
  std::vector<std::string> labels;

  SuperoperatorT& operator+=(const SuperoperatorT& other) {
    matrix += other.matrix;
    labels.insert(labels.end(), other.labels.begin(), other.labels.end());
    return *this;
  }
};

using Superoperator = SuperoperatorT<double>;

template <typename Real>
SuperoperatorT<Real> operator+(SuperoperatorT<Real> a, const SuperoperatorT<Real>& b) {
  a += b;
  return a;
}

template <typename Real>
SuperoperatorT<Real> operator*(Real s, SuperoperatorT<Real> a) {
  a.matrix *= s;
  return a;
}

template <typename Derived>
auto vec(const Eigen::MatrixBase<Derived>& rho) {
  using Real = typename Derived::RealScalar;
  const OperatorT<Real> m = rho;
  return LiouvilleVectorT<Real>(Eigen::Map<const LiouvilleVectorT<Real>>(m.data()));
}

template <typename Derived>
auto unvec(const Eigen::MatrixBase<Derived>& v) {
  using Real = typename Derived::RealScalar;
  const LiouvilleVectorT<Real> m = v;
  return OperatorT<Real>(Eigen::Map<const OperatorT<Real>>(m.data()));
}

/// Applies a superoperator to a density matrix.
template <typename Real, typename Derived>
OperatorT<Real> apply(const SuperoperatorT<Real>& s, const Eigen::MatrixBase<Derived>& rho) {
  return unvec(LiouvilleVectorT<Real>(s.matrix * vec(rho)));
}

/// D[c]ρ = c ρ c† - (c†c ρ + ρ c†c)/2
template <typename Derived>
auto dissipator(const Eigen::MatrixBase<Derived>& c, std::string label = "D[c]") {
  using Real = typename Derived::RealScalar;
  const OperatorT<Real> op = c;
  const OperatorT<Real> id = OperatorT<Real>::Identity();
  const OperatorT<Real> cdc = op.adjoint() * op;
  SuperoperatorT<Real> s;
  s.matrix = kron(op.conjugate(), op) - Real(0.5) * kron(id, cdc) - Real(0.5) * kron(cdc.transpose(), id);
  s.labels.push_back(std::move(label));
  return s;
}

/// ρ ↦ -i[H, ρ]. H must be Hermitian.
template <typename Derived>
auto hamiltonian_term(const Eigen::MatrixBase<Derived>& h, std::string label = "-i[H,.]") {
  using Real = typename Derived::RealScalar;
  const OperatorT<Real> op = h;
  if ((op - op.adjoint()).cwiseAbs().maxCoeff() > Real(1e-12) * std::max(Real(1), op.cwiseAbs().maxCoeff())) {
    throw ConfigError("hamiltonian_term: H is not Hermitian");
  }
  const OperatorT<Real> id = OperatorT<Real>::Identity();
  const Complex<Real> minus_i(Real(0), Real(-1));
  SuperoperatorT<Real> s;
  s.matrix = minus_i * (kron(id, op) - kron(op.transpose(), id));
  s.labels.push_back(std::move(label));
  return s;
}

/// Full Liouvillian
///   -iΩ[J_x, ρ] + Γη D[U_fb J-] + Γ(1-η) D[J-] + γ1 D[σ1] + γ2 D[σ2]
///   + γ_deph (D[σ1†σ1] + D[σ2†σ2]).
/// Feedback None means U_fb = I, and the two Γ terms add up to Γ D[J-].
/// Zero-rate terms are skipped, so η = 0 reproduces the no-feedback matrix
/// entry for entry.
template <typename Real = double>
SuperoperatorT<Real> build(const SystemConfig& config) {
  validate(config);
  const auto coll = collective_ops<Real>();
  const auto atoms = atomic_ops<Real>();
  const auto r = [](double v) { return static_cast<Real>(v); };

  SuperoperatorT<Real> l = hamiltonian_term(OperatorT<Real>(r(config.omega) * coll.j_x), "-iΩ[J_x,.]");
  const Real gamma = r(config.gamma_collective);
  const Real eta = r(config.eta);
  if (config.feedback.kind == FeedbackKind::None) {
    l += gamma * dissipator(coll.j_minus, "ΓD[J-]");
  } else {
    const OperatorT<Real> u = feedback_unitary<Real>(config.feedback.kind, r(config.feedback.strength));
    if (config.eta > 0.0) l += (gamma * eta) * dissipator(OperatorT<Real>(u * coll.j_minus), "ΓηD[U_fb J-]");
    if (config.eta < 1.0) l += (gamma * (Real(1) - eta)) * dissipator(coll.j_minus, "Γ(1-η)D[J-]");
  }
  if (config.gamma1 > 0.0) l += r(config.gamma1) * dissipator(atoms.sigma1, "γ1D[σ1]");
  if (config.gamma2 > 0.0) l += r(config.gamma2) * dissipator(atoms.sigma2, "γ2D[σ2]");
  if (config.gamma_deph > 0.0) {
    const Real gd = r(config.gamma_deph);
    l += gd * dissipator(OperatorT<Real>(atoms.sigma1_dag * atoms.sigma1), "γdD[σ1†σ1]");
    l += gd * dissipator(OperatorT<Real>(atoms.sigma2_dag * atoms.sigma2), "γdD[σ2†σ2]");
  }
  return l;
}

/// Largest |vec(I)† L| entry; zero for a trace-preserving generator.
template <typename Real>
Real trace_defect(const SuperoperatorT<Real>& l) {
  const LiouvilleVectorT<Real> id = vec(OperatorT<Real>::Identity());
  return (id.adjoint() * l.matrix).cwiseAbs().maxCoeff();
}

}  // namespace jumpfb
