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

#include "jumpfb/sweeps.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "jumpfb/entanglement.hpp"

namespace jumpfb {

std::vector<double> Axis::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) v[static_cast<std::size_t>(k)] = min + (max - min) * k / (count - 1);
  v.back() = max;
  return v;
}

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::SteadyConcurrence:
      return "concurrence";
    case Quantity::SteadyFidelity:
      return "fidelity";
    case Quantity::SteadyPurity:
      return "purity";
  }
  return "unknown";
}

void validate(const SweepSpec& spec) {
  validate(spec.base);
  for (const Axis* axis : {&spec.omega_axis, &spec.lambda_axis}) {
    if (axis->count < 2) throw ConfigError("sweep: each axis needs count >= 2");
    if (!std::isfinite(axis->min) || !std::isfinite(axis->max) || !(axis->min < axis->max)) {
      throw ConfigError("sweep: axis needs finite min < max");
    }
  }
}

SystemConfig cell_config(const SystemConfig& base, double omega, double lambda) {
  SystemConfig c = base;
  c.omega = omega;
  c.feedback.strength = lambda;
  return c;
}

CellValue evaluate_cell(const SweepSpec& spec, double omega, double lambda) {
  const SystemConfig config = cell_config(spec.base, omega, lambda);
  CellValue out;
  try {
    if (spec.hook) {
      out.value = spec.hook(config);
      out.diagnostics.null_dimension = 1;
      return out;
    }
    const SteadyStateResult ss = steady_state(build(config), spec.steady);
    out.diagnostics.null_dimension = ss.null_dimension;
    out.diagnostics.residual = ss.residual;
    switch (spec.quantity) {
      case Quantity::SteadyConcurrence:
        out.value = concurrence(ss.rho);
        break;
      case Quantity::SteadyFidelity:
        out.value = fidelity_to_singlet(ss.rho);
        break;
      case Quantity::SteadyPurity:
        out.value = purity(ss.rho);
        break;
    }
  } catch (const std::exception& e) {
    out.value = std::numeric_limits<double>::quiet_NaN();
    out.diagnostics.error = e.what();
  }
  return out;
}

namespace {

// True if `a` beats `b`: larger by more than tol, or tied and closer to the
// preferred corner (smaller Ω, then smaller |λ̃|).
bool better(const Optimum& a, const Optimum& b, double tol) {
  if (a.value > b.value + tol) return true;
  if (a.value < b.value - tol) return false;
  if (a.omega != b.omega) return a.omega < b.omega;
  return std::abs(a.lambda) < std::abs(b.lambda);
}

}  // namespace

SweepResult sweep(const SweepSpec& spec) {
  validate(spec);
  SweepResult result;
  result.omega_values = spec.omega_axis.values();
  result.lambda_values = spec.lambda_axis.values();
  const auto rows = static_cast<Eigen::Index>(result.omega_values.size());
  const auto cols = static_cast<Eigen::Index>(result.lambda_values.size());
  result.grid.resize(rows, cols);
  result.diagnostics.resize(static_cast<std::size_t>(rows * cols));

  std::vector<CellValue> cells(static_cast<std::size_t>(rows * cols));
  std::atomic<Eigen::Index> next{0};
  auto work = [&]() {
    for (Eigen::Index k = next++; k < rows * cols; k = next++) {
      cells[static_cast<std::size_t>(k)] = evaluate_cell(spec, result.omega_values[static_cast<std::size_t>(k / cols)],
                                                         result.lambda_values[static_cast<std::size_t>(k % cols)]);
    }
  };
  const int workers = std::max(1, spec.threads);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const CellValue& c = cells[static_cast<std::size_t>(i * cols + j)];
      result.grid(i, j) = c.value;
      result.diagnostics[static_cast<std::size_t>(i * cols + j)] = c.diagnostics;
      if (!c.diagnostics.valid()) continue;
      const Optimum candidate{result.omega_values[static_cast<std::size_t>(i)],
                              result.lambda_values[static_cast<std::size_t>(j)], c.value};
      if (!result.argmax || better(candidate, *result.argmax, spec.tie_tolerance)) result.argmax = candidate;
    }
  }
  return result;
}

namespace {

class Refiner {
 public:
  explicit Refiner(const SweepSpec& spec) : spec_(spec) {}

  Optimum at(double omega, double lambda) const {
    const CellValue c = evaluate_cell(spec_, omega, lambda);
    const double v = c.diagnostics.valid() ? c.value : -std::numeric_limits<double>::infinity();
    return {omega, lambda, v};
  }

  // Golden-section maximization along one axis on [lo, hi].
  template <typename Point>
  Optimum search(Point point, double lo, double hi, double tolerance) const {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    Optimum fc = point(c);
    Optimum fd = point(d);
    while (b - a > tolerance) {
      if (better(fc, fd, spec_.tie_tolerance)) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = point(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = point(d);
      }
    }
    Optimum best = better(fc, fd, spec_.tie_tolerance) ? fc : fd;
    for (const double edge : {lo, hi}) {
      const Optimum e = point(edge);
      if (better(e, best, spec_.tie_tolerance)) best = e;
    }
    return best;
  }

 private:
  const SweepSpec& spec_;
};

}  // namespace

Optimum refine_max(const SweepResult& result, const SweepSpec& spec) {
  if (!result.argmax) throw NumericalError("refine_max: sweep has no valid cells");
  const Refiner refiner(spec);
  Optimum x = *result.argmax;

  const Axis& oa = spec.omega_axis;
  const Axis& la = spec.lambda_axis;
  const double omega_width0 = 2.0 * oa.spacing();
  const double lambda_width0 = 2.0 * la.spacing();
  double omega_half = oa.spacing();
  double lambda_half = la.spacing();
  constexpr double kShrink = 1e-4;

  for (;;) {
    const double o_lo = std::max(oa.min, x.omega - omega_half);
    const double o_hi = std::min(oa.max, x.omega + omega_half);
    const double lambda_fixed = x.lambda;
    const Optimum along_omega = refiner.search(
        [&](double o) { return refiner.at(o, lambda_fixed); }, o_lo, o_hi, kShrink * omega_width0);
    if (better(along_omega, x, spec.tie_tolerance)) x = along_omega;

    const double l_lo = std::max(la.min, x.lambda - lambda_half);
    const double l_hi = std::min(la.max, x.lambda + lambda_half);
    const double omega_fixed = x.omega;
    const Optimum along_lambda = refiner.search(
        [&](double l) { return refiner.at(omega_fixed, l); }, l_lo, l_hi, kShrink * lambda_width0);
    if (better(along_lambda, x, spec.tie_tolerance)) x = along_lambda;

    if (2.0 * omega_half < kShrink * omega_width0 && 2.0 * lambda_half < kShrink * lambda_width0) break;
    omega_half /= 2.0;
    lambda_half /= 2.0;
  }
  return x;
}

TimeSeries time_series(const TimeSeriesSpec& spec) {
  if (spec.samples < 2) throw ConfigError("time_series: samples must be >= 2");
  const std::vector<double> times = uniform_times(spec.t_final, spec.samples);
  TimeSeries out;
  out.evolution = evolve(build(spec.config), spec.rho0, spec.t_final, times);
  out.rows.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const MeasureReport m = measure(out.evolution.states[k]);
    out.rows.push_back({times[k], m.concurrence, m.fidelity_to_singlet, m.purity});
  }
  return out;
}

std::optional<double> time_to_reach(const std::vector<TimeSeriesRow>& rows, double threshold) {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].concurrence >= threshold) {
      if (k == 0) return rows[0].t;
      const TimeSeriesRow& a = rows[k - 1];
      const TimeSeriesRow& b = rows[k];
      const double frac = (threshold - a.concurrence) / (b.concurrence - a.concurrence);
      return a.t + frac * (b.t - a.t);
    }
  }
  return std::nullopt;
}

}  // namespace jumpfb
