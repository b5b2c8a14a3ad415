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

#include <optional>
#include <span>
#include <vector>

#include "jumpfb/liouvillian.hpp"

namespace jumpfb {

/// Throws ConfigError unless ρ is Hermitian and unit-trace to 1e-10 and has
/// no eigenvalue below -1e-9.
void check_density_matrix(const DensityMatrix& rho);

/// Max-norm deviations from the density-matrix invariants, for audits.
struct PhysicalityReport {
  double hermiticity = 0;  // max |ρ - ρ†|
  double trace_error = 0;  // |Tr ρ - 1|
  double min_eigenvalue = 0;
};

PhysicalityReport physicality(const DensityMatrix& rho);

struct EvolveOptions {
  // Rate used for the base step 0.01 / rate. Defaults to the largest |entry| of L.
  std::optional<double> rate_scale;
  double halving_tolerance = 1e-8;
  int max_halvings = 6;
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  long step_count = 0;  // RK4 steps of the accepted run
  double step = 0;      // accepted base step
};

/// Integrates dρ/dt = Lρ with classic fixed-step RK4 and returns ρ at the
/// requested times. States are Hermitized and trace-normalized only in the
/// returned copies. The step is halved until halving it once more changes
/// every sampled entry by less than `halving_tolerance`.
EvolutionResult evolve(const Superoperator& l, const DensityMatrix& rho0, double t_final,
                       std::span<const double> sample_times, const EvolveOptions& options = {});

/// `count` evenly spaced points on [0, t_final], both ends included.
std::vector<double> uniform_times(double t_final, int count);

enum class Subspace {
  Full,
  // Operators supported on span{|gg>, |2>, |ee>}. Only valid for generators
  // that leave that block invariant (exchange-symmetric, no local decay).
  Symmetric,
};

struct SteadyStateOptions {
  double null_tolerance = 1e-10;  // relative to the largest singular value
  Subspace subspace = Subspace::Full;
};

struct SteadyStateResult {
  DensityMatrix rho;
  int null_dimension = 0;
  double residual = 0;  // ||L vec(ρ)||₂
  double gap = 0;       // second-smallest singular value
};

/// Null space of L from a full SVD. For a one-dimensional null space the
/// null vector is returned as a unit-trace state. For a larger null space
/// the state is the projection of vec(I) onto the null space, which does
/// not depend on the basis the SVD picked.
SteadyStateResult steady_state(const Superoperator& l, const SteadyStateOptions& options = {});

}  // namespace jumpfb
