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

#include "jumpfb/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace jumpfb {

namespace {

DensityMatrix sampled_state(const LiouvilleVector& v) {
  DensityMatrix rho = unvec(v);
  rho = (rho + rho.adjoint()) / 2.0;
  const double tr = rho.trace().real();
  if (tr != 0.0) rho /= tr;
  return rho;
}

// One RK4 step of a linear system is the matrix polynomial
// I + A + A²/2 + A³/6 + A⁴/24 with A = hL.
SuperMatrix rk4_step_matrix(const SuperMatrix& l, double h) {
  const SuperMatrix a = h * l;
  SuperMatrix term = SuperMatrix::Identity();
  SuperMatrix m = SuperMatrix::Identity();
  for (int k = 1; k <= 4; ++k) {
    term = (term * a) / static_cast<double>(k);
    m += term;
  }
  return m;
}

struct Run {
  std::vector<DensityMatrix> states;
  long steps = 0;
};

Run integrate(const SuperMatrix& l, const DensityMatrix& rho0, std::span<const double> sample_times, double h) {
  Run run;
  run.states.reserve(sample_times.size());
  LiouvilleVector v = vec(rho0);
  double t = 0.0;
  double cached_step = -1.0;
  SuperMatrix m;
  for (const double ts : sample_times) {
    const double gap = ts - t;
    if (gap > 0.0) {
      const long n = std::max<long>(1, static_cast<long>(std::ceil(gap / h * (1.0 - 1e-12))));
      const double sub = gap / static_cast<double>(n);
      if (sub != cached_step) {
        m = rk4_step_matrix(l, sub);
        cached_step = sub;
      }
      for (long k = 0; k < n; ++k) v = m * v;
      run.steps += n;
      t = ts;
    }
    run.states.push_back(sampled_state(v));
  }
  return run;
}

}  // namespace

PhysicalityReport physicality(const DensityMatrix& rho) {
  PhysicalityReport r;
  r.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  r.trace_error = std::abs(rho.trace() - 1.0);
  const Operator h = (rho + rho.adjoint()) / 2.0;
  r.min_eigenvalue = Eigen::SelfAdjointEigenSolver<Operator>(h, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  return r;
}

void check_density_matrix(const DensityMatrix& rho) {
  if (!rho.allFinite()) throw ConfigError("density matrix has non-finite entries");
  const PhysicalityReport r = physicality(rho);
  if (r.hermiticity > 1e-10) throw ConfigError("density matrix is not Hermitian");
  if (r.trace_error > 1e-10) throw ConfigError("density matrix does not have unit trace");
  if (r.min_eigenvalue < -1e-9) throw ConfigError("density matrix is not positive semidefinite");
}

std::vector<double> uniform_times(double t_final, int count) {
  if (count < 2) throw ConfigError("uniform_times: need at least two samples");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ConfigError("uniform_times: t_final must be > 0");
  std::vector<double> times(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) times[static_cast<std::size_t>(k)] = t_final * k / (count - 1);
  times.back() = t_final;
  return times;
}

EvolutionResult evolve(const Superoperator& l, const DensityMatrix& rho0, double t_final,
                       std::span<const double> sample_times, const EvolveOptions& options) {
  check_density_matrix(rho0);
  if (!std::isfinite(t_final) || t_final < 0.0) throw ConfigError("evolve: t_final must be finite and >= 0");
  double previous = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (const double t : sample_times) {
    if (!std::isfinite(t) || t < previous || t > t_final) {
      throw ConfigError("evolve: sample times must be sorted and lie in [0, t_final]");
    }
    if (t > previous) min_gap = std::min(min_gap, t - previous);
    previous = t;
  }

  const double rate = options.rate_scale.value_or(l.matrix.cwiseAbs().maxCoeff());
  double h = std::min(rate > 0.0 ? 0.01 / rate : std::numeric_limits<double>::infinity(), min_gap / 4.0);
  if (!std::isfinite(h)) h = std::max(t_final, 1.0);

  Run coarse = integrate(l.matrix, rho0, sample_times, h);
  double worst = 0.0;
  for (int halving = 1; halving <= options.max_halvings; ++halving) {
    Run fine = integrate(l.matrix, rho0, sample_times, h / 2.0);
    worst = 0.0;
    for (std::size_t k = 0; k < fine.states.size(); ++k) {
      worst = std::max(worst, (fine.states[k] - coarse.states[k]).cwiseAbs().maxCoeff());
    }
    h /= 2.0;
    if (worst < options.halving_tolerance) {
      EvolutionResult result;
      result.times.assign(sample_times.begin(), sample_times.end());
      result.states = std::move(fine.states);
      result.step_count = fine.steps;
      result.step = h;
      return result;
    }
    coarse = std::move(fine);
  }
  std::ostringstream msg;
  msg << "evolve: step refinement did not converge after " << options.max_halvings
      << " halvings; worst deviation " << worst;
  throw NumericalError(msg.str());
}

namespace {

// Orthonormal (Hilbert-Schmidt) basis of operators supported on the
// symmetric block, as columns of vec().
Eigen::Matrix<Complex<double>, kLiouvilleDim, 9> symmetric_block_basis() {
  const Operator u = dicke_basis();
  Eigen::Matrix<Complex<double>, kLiouvilleDim, 9> basis;
  int col = 0;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      basis.col(col++) = vec(Operator(u.col(i) * u.col(j).adjoint()));
    }
  }
  return basis;
}

}  // namespace

SteadyStateResult steady_state(const Superoperator& l, const SteadyStateOptions& options) {
  const double scale = std::max(1.0, l.matrix.cwiseAbs().maxCoeff());
  if (trace_defect(l) > 1e-10 * scale) throw ConfigError("steady_state: generator is not trace preserving");

  Eigen::MatrixXcd basis;
  if (options.subspace == Subspace::Symmetric) {
    basis = symmetric_block_basis();
    const Eigen::MatrixXcd image = l.matrix * basis;
    const Eigen::MatrixXcd leak = image - basis * (basis.adjoint() * image);
    if (leak.cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw ConfigError("steady_state: generator does not preserve the symmetric subspace");
    }
  } else {
    basis = Eigen::MatrixXcd::Identity(kLiouvilleDim, kLiouvilleDim);
  }
  const Eigen::MatrixXcd reduced = basis.adjoint() * l.matrix * basis;
  const Eigen::Index n = reduced.cols();

  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(reduced, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double threshold = options.null_tolerance * sv(0);
  int null_dim = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (sv(k) <= threshold) ++null_dim;
  }
  if (null_dim == 0) throw NumericalError("steady_state: no stationary state at the null-space tolerance");

  const Eigen::MatrixXcd null_space = svd.matrixV().rightCols(null_dim);
  const Eigen::VectorXcd identity = basis.adjoint() * vec(Operator::Identity());
  Eigen::VectorXcd x = null_dim == 1 ? Eigen::VectorXcd(null_space.col(0))
                                     : Eigen::VectorXcd(null_space * (null_space.adjoint() * identity));
  const Complex<double> tr = identity.dot(x);
  if (std::abs(tr) < 1e-12) throw NumericalError("steady_state: null vector is traceless");
  x /= tr;

  SteadyStateResult result;
  DensityMatrix rho = unvec(LiouvilleVector(basis * x));
  rho = (rho + rho.adjoint()) / 2.0;
  rho /= rho.trace().real();
  const double min_eig = physicality(rho).min_eigenvalue;
  if (min_eig < -1e-8) {
    std::ostringstream msg;
    msg << "steady_state: null vector is not a physical state (min eigenvalue " << min_eig
        << ", null dimension " << null_dim << ")";
    throw NumericalError(msg.str());
  }
  result.rho = rho;
  result.null_dimension = null_dim;
  result.residual = (l.matrix * vec(rho)).norm();
  result.gap = n >= 2 ? sv(n - 2) : 0.0;
  if (result.residual > 1e-9) {
    std::ostringstream msg;
    msg << "steady_state: residual " << result.residual << " exceeds 1e-9";
    throw NumericalError(msg.str());
  }
  return result;
}

}  // namespace jumpfb
