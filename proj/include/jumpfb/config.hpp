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
#include <string>

#include "jumpfb/operators.hpp"

namespace jumpfb {

struct Feedback {
  FeedbackKind kind = FeedbackKind::None;
  double strength = 0.0;  // λ̃, radians

  static Feedback none() { return {}; }
  static Feedback collective(double strength) { return {FeedbackKind::Collective, strength}; }
  static Feedback local(double strength) { return {FeedbackKind::Local, strength}; }
};

/// Physical and control parameters. Rates are in the same (arbitrary) unit;
/// everything in this project uses the collective decay rate as that unit.
struct SystemConfig {
  double omega = 0.0;             // effective Rabi frequency Ω
  double gamma_collective = 1.0;  // Γ
  double gamma1 = 0.0;            // spontaneous emission, atom 1
  double gamma2 = 0.0;            // spontaneous emission, atom 2
  double gamma_deph = 0.0;        // local dephasing, both atoms
  double eta = 1.0;               // detector efficiency
  Feedback feedback;

  /// Largest rate in the config; sets integration step sizes.
  double rate_scale() const {
    return std::max({std::abs(omega), gamma_collective, gamma1, gamma2, gamma_deph});
  }
};

inline void validate(const SystemConfig& c) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(c.omega) || !finite(c.gamma_collective) || !finite(c.gamma1) || !finite(c.gamma2) ||
      !finite(c.gamma_deph) || !finite(c.eta) || !finite(c.feedback.strength)) {
    throw ConfigError("system config: all parameters must be finite");
  }
  if (!(c.gamma_collective > 0.0)) throw ConfigError("system config: gamma_collective must be > 0");
  if (c.gamma1 < 0.0 || c.gamma2 < 0.0) throw ConfigError("system config: gamma1, gamma2 must be >= 0");
  if (c.gamma_deph < 0.0) throw ConfigError("system config: gamma_deph must be >= 0");
  if (c.eta < 0.0 || c.eta > 1.0) throw ConfigError("system config: eta must lie in [0, 1]");
}

inline std::string to_string(FeedbackKind kind) {
  switch (kind) {
    case FeedbackKind::None:
      return "none";
    case FeedbackKind::Collective:
      return "collective";
    case FeedbackKind::Local:
      return "local";
  }
  return "unknown";
}

}  // namespace jumpfb
