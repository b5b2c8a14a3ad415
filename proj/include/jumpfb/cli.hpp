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

// Run configuration (JSON), figure presets and CSV output for the command
// line front end.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "jumpfb/sweeps.hpp"

namespace jumpfb::cli {

using nlohmann::json;

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { Steady, Evolve, Traj, Sweep, Figure };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& name);

struct InitialState {
  std::string name = "gg";  // gg | ee | singlet | mixed | matrix
  DensityMatrix matrix = DensityMatrix::Zero();  // used when name == "matrix"

  DensityMatrix density() const;
  // Throws ConfigError unless the state is pure.
  StateVector pure_state() const;
};

struct TimeSettings {
  double t_final = 50.0;
  int samples = 101;
  double dt = 1e-3;
};

struct SweepSettings {
  Axis omega_axis{0.01, 3.0, 60};
  Axis lambda_axis{-std::numbers::pi, std::numbers::pi, 60};
  Quantity quantity = Quantity::SteadyConcurrence;
  Subspace subspace = Subspace::Full;
};

struct TrajectorySettings {
  int n = 1000;
  std::optional<std::uint64_t> base_seed;
};

struct OutputSettings {
  std::string path;
  std::string format = "csv";
};

struct RunConfig {
  Mode mode = Mode::Steady;
  SystemConfig physics;
  InitialState initial_state;
  TimeSettings time;
  SweepSettings sweep;
  TrajectorySettings trajectories;
  std::optional<std::string> figure;
  OutputSettings output;
};

/// Parses and validates a RunConfig document. Unknown keys, wrong types and
/// out-of-range values raise ConfigError.
RunConfig parse_run_config(const json& doc);

/// Full document with every section; parse_run_config(to_json(c)) == c.
json to_json(const RunConfig& config);

/// Sets `value` at a dotted path such as "physics.omega", creating objects.
void set_dotted(json& doc, const std::string& path, const json& value);

/// Complete config reproducing one of the figures 2a, 2b, 2c, 2d, 3, 4.
RunConfig figure_presets(const std::string& name);

/// Labelled configs of a time-series figure (3 or 4), derived from the
/// figure's physics block.
std::vector<std::pair<std::string, SystemConfig>> figure_series(const RunConfig& config);

/// Shortest-exact 17-significant-digit rendering, locale independent.
std::string format_number(double value);

struct RunOutcome {
  std::string csv;      // complete file contents
  std::string summary;  // one line, no trailing newline
};

/// Executes the configured mode. Numerical failures raise NumericalError.
RunOutcome execute(const RunConfig& config, int threads = 1);

/// Full command-line entry point; returns the process exit code.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace jumpfb::cli
