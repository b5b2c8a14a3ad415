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

#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "jumpfb/dynamics.hpp"

namespace jumpfb {

struct Axis {
  double min = 0;
  double max = 1;
  int count = 2;

  std::vector<double> values() const;
  double spacing() const { return (max - min) / (count - 1); }
};

enum class Quantity { SteadyConcurrence, SteadyFidelity, SteadyPurity };

std::string to_string(Quantity q);

// Replaces the steady-state evaluation of a cell. Receives the cell's config
// (omega and feedback strength set).
using QuantityHook = std::function<double(const SystemConfig&)>;

struct SweepSpec {
  SystemConfig base;
  Axis omega_axis{0.01, 3.0, 60};
  Axis lambda_axis{-std::numbers::pi, std::numbers::pi, 60};
  Quantity quantity = Quantity::SteadyConcurrence;
  SteadyStateOptions steady;
  QuantityHook hook;
  double tie_tolerance = 1e-9;  // values closer than this are ties
  int threads = 1;
};

void validate(const SweepSpec& spec);

struct CellDiagnostics {
  int null_dimension = 0;
  double residual = 0;
  std::string error;  // set when steady_state threw

  bool valid() const { return error.empty() && null_dimension == 1; }
};

struct Optimum {
  double omega = 0;
  double lambda = 0;
  double value = 0;
};

struct SweepResult {
  std::vector<double> omega_values;
  std::vector<double> lambda_values;
  Eigen::MatrixXd grid;                  // rows: omega, cols: lambda; NaN where the solver threw
  std::vector<CellDiagnostics> diagnostics;  // row-major
  std::optional<Optimum> argmax;         // over valid cells only

  const CellDiagnostics& cell(Eigen::Index row, Eigen::Index col) const {
    return diagnostics[static_cast<std::size_t>(row * grid.cols() + col)];
  }
};

struct CellValue {
  double value = 0;
  CellDiagnostics diagnostics;
};

SystemConfig cell_config(const SystemConfig& base, double omega, double lambda);

/// Steady-state quantity at one (Ω, λ̃). Solver errors are captured in the
/// diagnostics, never thrown.
CellValue evaluate_cell(const SweepSpec& spec, double omega, double lambda);

SweepResult sweep(const SweepSpec& spec);

/// Coordinate-descent refinement of the grid argmax: alternating
/// golden-section searches along Ω and λ̃ inside a bracket of one grid cell
/// either side, halving the brackets each round until both are below 1e-4
/// of their starting width. Ties go to smaller Ω, then smaller |λ̃|.
Optimum refine_max(const SweepResult& result, const SweepSpec& spec);

struct TimeSeriesSpec {
  SystemConfig config;
  DensityMatrix rho0 = DensityMatrix::Identity() / 4.0;
  double t_final = 50;
  int samples = 101;
};

struct TimeSeriesRow {
  double t = 0;
  double concurrence = 0;
  double fidelity = 0;
  double purity = 0;
};

struct TimeSeries {
  std::vector<TimeSeriesRow> rows;
  EvolutionResult evolution;
};

TimeSeries time_series(const TimeSeriesSpec& spec);

/// First time the concurrence reaches `threshold`, linearly interpolated
/// between samples.
std::optional<double> time_to_reach(const std::vector<TimeSeriesRow>& rows, double threshold);

}  // namespace jumpfb
