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

#include "jumpfb/trajectories.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include <unsupported/Eigen/MatrixFunctions>

#include "jumpfb/entanglement.hpp"

namespace jumpfb {

std::string to_string(ChannelLabel label) {
  switch (label) {
    case ChannelLabel::DetectedCollective:
      return "detected_collective";
    case ChannelLabel::UndetectedCollective:
      return "undetected_collective";
    case ChannelLabel::Spont1:
      return "spont1";
    case ChannelLabel::Spont2:
      return "spont2";
    case ChannelLabel::Deph1:
      return "deph1";
    case ChannelLabel::Deph2:
      return "deph2";
  }
  return "unknown";
}

std::vector<JumpChannel> channels(const SystemConfig& config) {
  validate(config);
  const auto coll = collective_ops();
  const auto atoms = atomic_ops();
  const Operator u = feedback_unitary(config.feedback.kind, config.feedback.strength);
  const Operator n1 = atoms.sigma1_dag * atoms.sigma1;
  const Operator n2 = atoms.sigma2_dag * atoms.sigma2;
  const double g = config.gamma_collective;

  std::vector<JumpChannel> out;
  auto add = [&out](ChannelLabel label, const Operator& op, double rate) {
    if (rate > 0.0) out.push_back({label, op, rate});
  };
  add(ChannelLabel::DetectedCollective, u * coll.j_minus, g * config.eta);
  add(ChannelLabel::UndetectedCollective, coll.j_minus, g * (1.0 - config.eta));
  add(ChannelLabel::Spont1, atoms.sigma1, config.gamma1);
  add(ChannelLabel::Spont2, atoms.sigma2, config.gamma2);
  add(ChannelLabel::Deph1, n1, config.gamma_deph);
  add(ChannelLabel::Deph2, n2, config.gamma_deph);

  Operator decay = Operator::Zero();
  for (const auto& c : out) decay += c.rate * (c.op.adjoint() * c.op);
  const Operator expected = g * (coll.j_plus * coll.j_minus) + config.gamma1 * n1 + config.gamma2 * n2 +
                            config.gamma_deph * (n1 + n2);
  if ((decay - expected).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, config.rate_scale())) {
    throw NumericalError("channels: decay operator does not match the master equation");
  }
  return out;
}

Operator effective_hamiltonian(const SystemConfig& config, std::span<const JumpChannel> chans) {
  Operator h = config.omega * collective_ops().j_x;
  const Complex<double> half_i(0.0, 0.5);
  for (const auto& c : chans) h -= half_i * c.rate * (c.op.adjoint() * c.op);
  return h;
}

TrajectoryRecord run_trajectory(const SystemConfig& config, const StateVector& psi0, double t_final, double dt,
                                std::uint64_t seed, std::span<const double> sample_times) {
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw ConfigError("run_trajectory: initial state must have unit norm");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("run_trajectory: dt must be > 0");
  if (!std::isfinite(t_final) || t_final < 0.0) throw ConfigError("run_trajectory: t_final must be >= 0");
  double previous = 0.0;
  for (const double t : sample_times) {
    if (!std::isfinite(t) || t < previous || t > t_final) {
      throw ConfigError("run_trajectory: sample times must be sorted and lie in [0, t_final]");
    }
    previous = t;
  }

  const auto chans = channels(config);
  const Operator h_eff = effective_hamiltonian(config, chans);
  const Complex<double> minus_i(0.0, -1.0);

  TrajectoryRecord rec;
  rec.seed = seed;
  rec.times.assign(sample_times.begin(), sample_times.end());
  rec.states.reserve(sample_times.size());

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  StateVector psi = psi0;
  double t = 0.0;
  double cached_step = -1.0;
  Operator propagator;
  std::vector<double> probs(chans.size());

  for (const double ts : sample_times) {
    const double gap = ts - t;
    if (gap > 0.0) {
      const long n = std::max<long>(1, static_cast<long>(std::ceil(gap / dt * (1.0 - 1e-12))));
      const double h = gap / static_cast<double>(n);
      if (h != cached_step) {
        propagator = (minus_i * h * h_eff).exp();
        cached_step = h;
      }
      for (long k = 0; k < n; ++k) {
        double total = 0.0;
        for (std::size_t c = 0; c < chans.size(); ++c) {
          probs[c] = chans[c].rate * (chans[c].op * psi).squaredNorm() * h;
          total += probs[c];
        }
        if (total > 0.1) {
          std::ostringstream msg;
          msg << "run_trajectory: jump probability " << total << " per step exceeds 0.1; use a smaller dt";
          throw NumericalError(msg.str());
        }
        const double r = uniform(rng);
        const double t_step = t + static_cast<double>(k + 1) * h;
        if (r < total) {
          std::size_t chosen = chans.size() - 1;
          double acc = 0.0;
          for (std::size_t c = 0; c < chans.size(); ++c) {
            acc += probs[c];
            if (r < acc) {
              chosen = c;
              break;
            }
          }
          psi = chans[chosen].op * psi;
          psi.normalize();
          rec.jumps.push_back({t_step, chans[chosen].label});
        } else {
          psi = propagator * psi;
          psi.normalize();
        }
      }
      t = ts;
    }
    rec.states.push_back(psi);
  }
  return rec;
}

EnsembleResult ensemble_average(const SystemConfig& config, const StateVector& psi0, double t_final, double dt,
                                int n, std::uint64_t base_seed, std::span<const double> sample_times,
                                int threads) {
  if (n < 1) throw ConfigError("ensemble_average: n must be >= 1");
  std::vector<TrajectoryRecord> records(static_cast<std::size_t>(n));

  // Each worker claims indices from a shared counter; record i only ever
  // depends on seed base_seed + i.
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  auto work = [&]() {
    for (int i = next++; i < n; i = next++) {
      try {
        records[static_cast<std::size_t>(i)] =
            run_trajectory(config, psi0, t_final, dt, base_seed + static_cast<std::uint64_t>(i), sample_times);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp(threads, 1, n);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const std::size_t samples = sample_times.size();
  const Operator dicke = dicke_basis();
  EnsembleResult out;
  out.n = n;
  out.times.assign(sample_times.begin(), sample_times.end());
  out.mean_states.assign(samples, Operator::Zero());
  out.standard_error.assign(samples, 0.0);
  out.mean_concurrence.assign(samples, 0.0);

  // Welford accumulators for the Dicke-basis populations.
  std::vector<Eigen::Vector4d> pop_mean(samples, Eigen::Vector4d::Zero());
  std::vector<Eigen::Vector4d> pop_m2(samples, Eigen::Vector4d::Zero());
  double jumps = 0.0;
  double count = 0.0;
  for (const auto& rec : records) {
    jumps += static_cast<double>(rec.jumps.size());
    count += 1.0;
    for (std::size_t s = 0; s < samples; ++s) {
      const StateVector& psi = rec.states[s];
      out.mean_states[s] += psi * psi.adjoint();
      const Eigen::Vector4d pops = (dicke.adjoint() * psi).cwiseAbs2();
      const Eigen::Vector4d delta = pops - pop_mean[s];
      pop_mean[s] += delta / count;
      pop_m2[s] += delta.cwiseProduct(pops - pop_mean[s]);
    }
  }
  const double dn = static_cast<double>(n);
  out.mean_jump_count = jumps / dn;
  for (std::size_t s = 0; s < samples; ++s) {
    out.mean_states[s] /= dn;
    out.mean_concurrence[s] = concurrence(out.mean_states[s]);
    if (n > 1) {
      const Eigen::Vector4d var = (pop_m2[s] / (dn - 1.0)).cwiseMax(0.0);
      out.standard_error[s] = std::sqrt(var.maxCoeff() / dn);
    }
  }
  return out;
}

}  // namespace jumpfb
