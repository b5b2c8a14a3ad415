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

// Monte-Carlo wave-function unraveling of the feedback master equation.
// A detected collective jump applies U_fb J-; an undetected one applies J-.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jumpfb/config.hpp"

namespace jumpfb {

enum class ChannelLabel { DetectedCollective, UndetectedCollective, Spont1, Spont2, Deph1, Deph2 };

std::string to_string(ChannelLabel label);

struct JumpChannel {
  ChannelLabel label;
  Operator op;  // includes the feedback unitary for DetectedCollective
  double rate = 0;
};

/// Jump channels with nonzero rate. Throws if Σ rate op†op differs from
/// Γ J+J- + γ1 σ1†σ1 + γ2 σ2†σ2 + γ_deph (n1 + n2).
std::vector<JumpChannel> channels(const SystemConfig& config);

/// H_eff = Ω J_x - (i/2) Σ rate op†op
Operator effective_hamiltonian(const SystemConfig& config, std::span<const JumpChannel> chans);

struct JumpEvent {
  double time = 0;
  ChannelLabel label;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<JumpEvent> jumps;
};

/// First-order MCWF. Per step of length h ≤ dt the jump probability of
/// channel k is rate_k |op_k ψ|² h; otherwise ψ ← exp(-i H_eff h) ψ,
/// renormalized. Steps are shortened so that sample times are hit exactly.
/// Throws NumericalError if a step has total jump probability above 0.1.
TrajectoryRecord run_trajectory(const SystemConfig& config, const StateVector& psi0, double t_final, double dt,
                                std::uint64_t seed, std::span<const double> sample_times);

struct EnsembleResult {
  std::vector<double> times;
  std::vector<DensityMatrix> mean_states;
  // Per sample time: the largest standard error of the Dicke-basis populations.
  std::vector<double> standard_error;
  std::vector<double> mean_concurrence;
  double mean_jump_count = 0;
  int n = 0;
};

/// Mean of n trajectories seeded base_seed + i. Trajectories may run on
/// `threads` workers; the reduction runs in index order, so the result does
/// not depend on the thread count.
EnsembleResult ensemble_average(const SystemConfig& config, const StateVector& psi0, double t_final, double dt,
                                int n, std::uint64_t base_seed, std::span<const double> sample_times,
                                int threads = 1);

}  // namespace jumpfb
