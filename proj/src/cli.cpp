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

#include "jumpfb/cli.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>

#include "jumpfb/entanglement.hpp"
#include "jumpfb/trajectories.hpp"

namespace jumpfb::cli {

namespace {

constexpr std::array<std::string_view, 6> kFigureNames = {"2a", "2b", "2c", "2d", "3", "4"};

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const auto key : allowed) known = known || item.key() == key;
    if (!known) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

double get_number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return v.get<double>();
}

long long get_integer(const json& obj, const char* key, long long fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<long long>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

Axis parse_axis(const json& obj, const Axis& fallback, const std::string& where) {
  reject_unknown(obj, {"min", "max", "count"}, where);
  Axis a;
  a.min = get_number(obj, "min", fallback.min, where);
  a.max = get_number(obj, "max", fallback.max, where);
  a.count = static_cast<int>(get_integer(obj, "count", fallback.count, where));
  if (a.count < 2) throw ConfigError(where + ".count must be >= 2");
  if (!(a.min < a.max)) throw ConfigError(where + ": min must be < max");
  return a;
}

json axis_json(const Axis& a) { return json{{"min", a.min}, {"max", a.max}, {"count", a.count}}; }

Quantity parse_quantity(const std::string& name) {
  if (name == "concurrence") return Quantity::SteadyConcurrence;
  if (name == "fidelity") return Quantity::SteadyFidelity;
  if (name == "purity") return Quantity::SteadyPurity;
  throw ConfigError("sweep.quantity: expected concurrence, fidelity or purity");
}

Subspace parse_subspace(const std::string& name) {
  if (name == "full") return Subspace::Full;
  if (name == "symmetric") return Subspace::Symmetric;
  throw ConfigError("sweep.subspace: expected full or symmetric");
}

FeedbackKind parse_kind(const std::string& name) {
  if (name == "none") return FeedbackKind::None;
  if (name == "collective") return FeedbackKind::Collective;
  if (name == "local") return FeedbackKind::Local;
  throw ConfigError("feedback.kind: expected none, collective or local");
}

InitialState parse_initial_state(const json& v) {
  InitialState s;
  if (v.is_string()) {
    s.name = v.get<std::string>();
    if (s.name != "gg" && s.name != "ee" && s.name != "singlet" && s.name != "mixed") {
      throw ConfigError("initial_state: expected gg, ee, singlet, mixed or a 4x4 matrix");
    }
    return s;
  }
  if (!v.is_array() || v.size() != 4) throw ConfigError("initial_state: matrix must have 4 rows");
  s.name = "matrix";
  for (int i = 0; i < 4; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != 4) throw ConfigError("initial_state: each row must have 4 entries");
    for (int j = 0; j < 4; ++j) {
      const json& z = row[static_cast<std::size_t>(j)];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
        throw ConfigError("initial_state: entries must be [re, im] pairs");
      }
      s.matrix(i, j) = Complex<double>(z[0].get<double>(), z[1].get<double>());
    }
  }
  check_density_matrix(s.matrix);
  return s;
}

json initial_state_json(const InitialState& s) {
  if (s.name != "matrix") return s.name;
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) row.push_back(json::array({s.matrix(i, j).real(), s.matrix(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

bool is_figure_name(const std::string& name) {
  for (const auto f : kFigureNames) {
    if (name == f) return true;
  }
  return false;
}

}  // namespace

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Steady:
      return "steady";
    case Mode::Evolve:
      return "evolve";
    case Mode::Traj:
      return "traj";
    case Mode::Sweep:
      return "sweep";
    case Mode::Figure:
      return "figure";
  }
  return "unknown";
}

Mode parse_mode(const std::string& name) {
  for (const Mode m : {Mode::Steady, Mode::Evolve, Mode::Traj, Mode::Sweep, Mode::Figure}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("mode: expected steady, evolve, traj, sweep or figure");
}

DensityMatrix InitialState::density() const {
  if (name == "gg") return projector(ket_gg());
  if (name == "ee") return projector(ket_ee());
  if (name == "singlet") return projector(ket_singlet());
  if (name == "mixed") return DensityMatrix::Identity() / 4.0;
  return matrix;
}

StateVector InitialState::pure_state() const {
  if (name == "gg") return ket_gg();
  if (name == "ee") return ket_ee();
  if (name == "singlet") return ket_singlet();
  const DensityMatrix rho = density();
  if (std::abs(purity(rho) - 1.0) > 1e-9) throw ConfigError("initial_state: trajectories need a pure state");
  const Eigen::SelfAdjointEigenSolver<Operator> eig(rho);
  return eig.eigenvectors().col(kDim - 1).normalized();
}

RunConfig parse_run_config(const json& doc) {
  reject_unknown(doc, {"mode", "physics", "feedback", "initial_state", "time", "sweep", "trajectories", "figure",
                       "output"},
                 "config");
  RunConfig c;
  c.mode = parse_mode(get_string(doc, "mode", "steady", "config"));

  if (doc.contains("physics")) {
    const json& p = doc.at("physics");
    reject_unknown(p, {"omega", "gamma_collective", "gamma1", "gamma2", "gamma_deph", "eta"}, "physics");
    c.physics.omega = get_number(p, "omega", c.physics.omega, "physics");
    c.physics.gamma_collective = get_number(p, "gamma_collective", c.physics.gamma_collective, "physics");
    c.physics.gamma1 = get_number(p, "gamma1", c.physics.gamma1, "physics");
    c.physics.gamma2 = get_number(p, "gamma2", c.physics.gamma2, "physics");
    c.physics.gamma_deph = get_number(p, "gamma_deph", c.physics.gamma_deph, "physics");
    c.physics.eta = get_number(p, "eta", c.physics.eta, "physics");
  }
  if (doc.contains("feedback")) {
    const json& f = doc.at("feedback");
    reject_unknown(f, {"kind", "lambda"}, "feedback");
    c.physics.feedback.kind = parse_kind(get_string(f, "kind", "none", "feedback"));
    c.physics.feedback.strength = get_number(f, "lambda", 0.0, "feedback");
  }
  validate(c.physics);

  if (doc.contains("initial_state")) c.initial_state = parse_initial_state(doc.at("initial_state"));

  if (doc.contains("time")) {
    const json& t = doc.at("time");
    reject_unknown(t, {"t_final", "samples", "dt"}, "time");
    c.time.t_final = get_number(t, "t_final", c.time.t_final, "time");
    c.time.samples = static_cast<int>(get_integer(t, "samples", c.time.samples, "time"));
    c.time.dt = get_number(t, "dt", c.time.dt, "time");
  }
  if (!(c.time.t_final > 0.0) || !std::isfinite(c.time.t_final)) throw ConfigError("time.t_final must be > 0");
  if (c.time.samples < 2) throw ConfigError("time.samples must be >= 2");
  if (!(c.time.dt > 0.0) || !std::isfinite(c.time.dt)) throw ConfigError("time.dt must be > 0");

  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    reject_unknown(s, {"omega_axis", "lambda_axis", "quantity", "subspace"}, "sweep");
    if (s.contains("omega_axis")) c.sweep.omega_axis = parse_axis(s.at("omega_axis"), c.sweep.omega_axis, "sweep.omega_axis");
    if (s.contains("lambda_axis")) {
      c.sweep.lambda_axis = parse_axis(s.at("lambda_axis"), c.sweep.lambda_axis, "sweep.lambda_axis");
    }
    c.sweep.quantity = parse_quantity(get_string(s, "quantity", "concurrence", "sweep"));
    c.sweep.subspace = parse_subspace(get_string(s, "subspace", "full", "sweep"));
  }

  if (doc.contains("trajectories")) {
    const json& t = doc.at("trajectories");
    reject_unknown(t, {"n", "base_seed"}, "trajectories");
    c.trajectories.n = static_cast<int>(get_integer(t, "n", c.trajectories.n, "trajectories"));
    if (t.contains("base_seed")) {
      const json& s = t.at("base_seed");
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
        throw ConfigError("trajectories.base_seed: expected a non-negative integer");
      }
      c.trajectories.base_seed = s.get<std::uint64_t>();
    }
  }
  if (c.trajectories.n < 1) throw ConfigError("trajectories.n must be >= 1");
  if (c.mode == Mode::Traj && !c.trajectories.base_seed) {
    throw ConfigError("trajectories.base_seed is required for traj mode");
  }

  if (doc.contains("figure")) {
    const json& f = doc.at("figure");
    std::string name;
    if (f.is_string()) {
      name = f.get<std::string>();
    } else if (f.is_number_integer()) {
      name = std::to_string(f.get<long long>());
    } else {
      throw ConfigError("figure: expected a figure name");
    }
    if (!is_figure_name(name)) throw ConfigError("figure: expected one of 2a, 2b, 2c, 2d, 3, 4");
    c.figure = name;
  }
  if (c.mode == Mode::Figure && !c.figure) throw ConfigError("figure mode needs a figure name");

  if (doc.contains("output")) {
    const json& o = doc.at("output");
    reject_unknown(o, {"path", "format"}, "output");
    c.output.path = get_string(o, "path", "", "output");
    c.output.format = get_string(o, "format", "csv", "output");
  }
  if (c.output.format != "csv") throw ConfigError("output.format: only csv is supported");
  return c;
}

json to_json(const RunConfig& c) {
  json doc;
  doc["mode"] = to_string(c.mode);
  doc["physics"] = {{"omega", c.physics.omega},       {"gamma_collective", c.physics.gamma_collective},
                    {"gamma1", c.physics.gamma1},     {"gamma2", c.physics.gamma2},
                    {"gamma_deph", c.physics.gamma_deph}, {"eta", c.physics.eta}};
  doc["feedback"] = {{"kind", to_string(c.physics.feedback.kind)}, {"lambda", c.physics.feedback.strength}};
  doc["initial_state"] = initial_state_json(c.initial_state);
  doc["time"] = {{"t_final", c.time.t_final}, {"samples", c.time.samples}, {"dt", c.time.dt}};
  doc["sweep"] = {{"omega_axis", axis_json(c.sweep.omega_axis)},
                  {"lambda_axis", axis_json(c.sweep.lambda_axis)},
                  {"quantity", to_string(c.sweep.quantity)},
                  {"subspace", c.sweep.subspace == Subspace::Symmetric ? "symmetric" : "full"}};
  doc["trajectories"] = {{"n", c.trajectories.n}};
  if (c.trajectories.base_seed) doc["trajectories"]["base_seed"] = *c.trajectories.base_seed;
  if (c.figure) doc["figure"] = *c.figure;
  doc["output"] = {{"path", c.output.path}, {"format", c.output.format}};
  return doc;
}

void set_dotted(json& doc, const std::string& path, const json& value) {
  if (path.empty()) throw ConfigError("override: empty key");
  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("override: malformed key '" + path + "'");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError("override: '" + path + "' descends into a non-object");
      *node = json::object();
    }
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

RunConfig figure_presets(const std::string& name) {
  constexpr double pi = std::numbers::pi;
  RunConfig c;
  c.mode = Mode::Figure;
  c.figure = name;
  c.output.path = "figure" + name + ".csv";
  if (name == "2a" || name == "2b") {
    c.physics.feedback = Feedback::collective(0.0);
    c.sweep.omega_axis = {0.01, 0.3, 60};
    c.sweep.lambda_axis = {-pi, pi, 60};
    if (name == "2a") {
      // Without decay |4> is dark for any collective feedback; the surface is
      // the steady state of the symmetric block.
      c.sweep.subspace = Subspace::Symmetric;
    } else {
      c.physics.gamma1 = c.physics.gamma2 = 0.01;
    }
  } else if (name == "2c" || name == "2d") {
    c.physics.feedback = Feedback::local(0.0);
    c.sweep.omega_axis = {0.01, 3.0, 60};
    c.sweep.lambda_axis = {-pi, pi, 60};
    if (name == "2d") c.physics.gamma1 = c.physics.gamma2 = 0.01;
  } else if (name == "3") {
    c.physics.omega = 3.0;
    c.physics.feedback = Feedback::local(pi / 2);
    c.initial_state.name = "singlet";
    c.time = {500.0, 501, 1e-3};
  } else if (name == "4") {
    c.physics.omega = 0.4;
    c.physics.feedback = Feedback::local(pi / 2);
    c.initial_state.name = "gg";
    c.time = {200.0, 2001, 1e-3};
  } else {
    throw ConfigError("figure: expected one of 2a, 2b, 2c, 2d, 3, 4");
  }
  return c;
}

std::vector<std::pair<std::string, SystemConfig>> figure_series(const RunConfig& config) {
  std::vector<std::pair<std::string, SystemConfig>> series;
  const SystemConfig base = config.physics;
  auto with = [&base](double gamma, double deph, double eta, bool control) {
    SystemConfig c = base;
    c.gamma1 = c.gamma2 = gamma;
    c.gamma_deph = deph;
    c.eta = eta;
    if (!control) c.feedback = Feedback::none();
    return c;
  };
  if (config.figure == "3") {
    series.emplace_back("C1_nocontrol", with(0.001, 0.0, 1.0, false));
    series.emplace_back("C2_nocontrol", with(0.01, 0.0, 1.0, false));
    series.emplace_back("C1_control", with(0.001, 0.0, 1.0, true));
    series.emplace_back("C2_control", with(0.01, 0.0, 1.0, true));
    series.emplace_back("C3_control", with(0.01, 0.01, 1.0, true));
  } else if (config.figure == "4") {
    series.emplace_back("eta1_gamma0", with(0.0, 0.0, 1.0, true));
    series.emplace_back("eta0.5_gamma0", with(0.0, 0.0, 0.5, true));
    series.emplace_back("eta1_gamma0.01", with(0.01, 0.0, 1.0, true));
    series.emplace_back("eta0.5_gamma0.01", with(0.01, 0.0, 0.5, true));
  } else {
    throw ConfigError("figure_series: only figures 3 and 4 are time series");
  }
  return series;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::string fixed6(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 6);
  return std::string(buf.data(), res.ptr);
}

class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string> header) { row_strings(header); }
  explicit CsvWriter(const std::vector<std::string>& header) { row_strings(header); }

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  template <typename Range>
  void row_strings(const Range& cells) {
    bool first = true;
    for (const auto& c : cells) {
      out_ << (first ? "" : ",") << c;
      first = false;
    }
    out_ << '\n';
  }

  static std::string cell(double v) { return format_number(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  std::ostringstream out_;
};

SweepSpec sweep_spec(const RunConfig& c, int threads) {
  SweepSpec spec;
  spec.base = c.physics;
  spec.omega_axis = c.sweep.omega_axis;
  spec.lambda_axis = c.sweep.lambda_axis;
  spec.quantity = c.sweep.quantity;
  spec.steady.subspace = c.sweep.subspace;
  spec.threads = threads;
  return spec;
}

RunOutcome run_sweep(const RunConfig& c, int threads) {
  const SweepSpec spec = sweep_spec(c, threads);
  const SweepResult r = sweep(spec);
  const std::string q = to_string(spec.quantity);
  CsvWriter csv({"omega", "lambda", q, "null_dimension", "residual"});
  for (std::size_t i = 0; i < r.omega_values.size(); ++i) {
    for (std::size_t j = 0; j < r.lambda_values.size(); ++j) {
      const auto row = static_cast<Eigen::Index>(i);
      const auto col = static_cast<Eigen::Index>(j);
      const CellDiagnostics& d = r.cell(row, col);
      csv.row(r.omega_values[i], r.lambda_values[j], r.grid(row, col), d.null_dimension, d.residual);
    }
  }
  std::ostringstream summary;
  summary << "mode=" << to_string(c.mode);
  if (c.figure) summary << " figure=" << *c.figure;
  if (r.argmax) {
    summary << " max_" << q << "=" << fixed6(r.argmax->value) << " omega=" << fixed6(r.argmax->omega)
            << " lambda=" << fixed6(r.argmax->lambda)
            << " lambda_equivalent=" << fixed6(equivalent_strength(r.argmax->lambda));
  } else {
    summary << " no_valid_cells";
  }
  return {csv.str(), summary.str()};
}

void add_series(CsvWriter& csv, const std::vector<TimeSeriesRow>& rows, const std::string& label) {
  for (const auto& r : rows) {
    if (label.empty()) {
      csv.row(r.t, r.concurrence, r.fidelity, r.purity);
    } else {
      csv.row(r.t, r.concurrence, r.fidelity, r.purity, label);
    }
  }
}

}  // namespace

RunOutcome execute(const RunConfig& c, int threads) {
  std::ostringstream summary;
  summary << "mode=" << to_string(c.mode);
  switch (c.mode) {
    case Mode::Steady: {
      SteadyStateOptions opts;
      opts.subspace = c.sweep.subspace;
      const SteadyStateResult ss = steady_state(build(c.physics), opts);
      const MeasureReport m = measure(ss.rho);
      CsvWriter csv({"name", "value"});
      csv.row("concurrence", m.concurrence);
      csv.row("fidelity", m.fidelity_to_singlet);
      csv.row("purity", m.purity);
      csv.row("null_dimension", ss.null_dimension);
      csv.row("residual", ss.residual);
      csv.row("gap", ss.gap);
      for (int i = 0; i < kDim; ++i) {
        for (int j = 0; j < kDim; ++j) {
          const std::string idx = std::to_string(i) + std::to_string(j);
          csv.row("rho_re_" + idx, ss.rho(i, j).real());
          csv.row("rho_im_" + idx, ss.rho(i, j).imag());
        }
      }
      summary << " concurrence=" << fixed6(m.concurrence) << " fidelity=" << fixed6(m.fidelity_to_singlet)
              << " purity=" << fixed6(m.purity) << " null_dimension=" << ss.null_dimension;
      return {csv.str(), summary.str()};
    }
    case Mode::Evolve: {
      const TimeSeries ts = time_series({c.physics, c.initial_state.density(), c.time.t_final, c.time.samples});
      CsvWriter csv({"t", "concurrence", "fidelity", "purity"});
      add_series(csv, ts.rows, "");
      summary << " t_final=" << format_number(c.time.t_final)
              << " final_concurrence=" << fixed6(ts.rows.back().concurrence);
      return {csv.str(), summary.str()};
    }
    case Mode::Traj: {
      if (!c.trajectories.base_seed) throw ConfigError("trajectories.base_seed is required for traj mode");
      const std::vector<double> times = uniform_times(c.time.t_final, c.time.samples);
      const EnsembleResult e = ensemble_average(c.physics, c.initial_state.pure_state(), c.time.t_final, c.time.dt,
                                                c.trajectories.n, *c.trajectories.base_seed, times, threads);
      CsvWriter csv({"t", "mean_concurrence", "stderr", "n"});
      for (std::size_t k = 0; k < times.size(); ++k) csv.row(times[k], e.mean_concurrence[k], e.standard_error[k], e.n);
      summary << " n=" << e.n << " final_mean_concurrence=" << fixed6(e.mean_concurrence.back())
              << " mean_jumps=" << fixed6(e.mean_jump_count);
      return {csv.str(), summary.str()};
    }
    case Mode::Sweep:
      return run_sweep(c, threads);
    case Mode::Figure: {
      if (!c.figure) throw ConfigError("figure mode needs a figure name");
      if (c.figure->front() == '2') return run_sweep(c, threads);
      summary << " figure=" << *c.figure;
      CsvWriter csv({"t", "concurrence", "fidelity", "purity", "series_label"});
      for (const auto& [label, config] : figure_series(c)) {
        const TimeSeries ts = time_series({config, c.initial_state.density(), c.time.t_final, c.time.samples});
        add_series(csv, ts.rows, label);
        summary << " " << label << "=" << fixed6(ts.rows.back().concurrence);
      }
      return {csv.str(), summary.str()};
    }
  }
  throw ConfigError("unknown mode");
}

namespace {

json parse_override_value(const std::string& text) {
  const json parsed = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) return text;
  return parsed;
}

void apply_extras(json& doc, const std::vector<std::string>& extras) {
  for (std::size_t k = 0; k < extras.size(); ++k) {
    const std::string& tok = extras[k];
    if (tok.rfind("--", 0) != 0) throw ConfigError("unexpected argument '" + tok + "'");
    std::string key = tok.substr(2);
    std::string value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (k + 1 >= extras.size()) throw ConfigError("override '" + tok + "' needs a value");
      value = extras[++k];
    }
    set_dotted(doc, key, parse_override_value(value));
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return json::parse(text.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file '" + path + "'");
  out << contents;
  out.flush();
  if (!out) throw IoError("failed writing output file '" + path + "'");
}

}  // namespace

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-qubit jump-feedback simulator", "jumpfb"};
  app.require_subcommand(1);
  std::string config_path;
  std::string output_path;
  int threads = 1;
  const std::array<std::pair<const char*, const char*>, 5> commands = {{
      {"steady", "steady state of the master equation"},
      {"evolve", "time evolution from an initial state"},
      {"traj", "quantum-jump trajectory ensemble"},
      {"sweep", "steady-state grid over (omega, lambda)"},
      {"figure", "data for a named figure preset"},
  }};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "RunConfig JSON file");
    sub->add_option("--output", output_path, "CSV output path (overrides output.path)");
    sub->add_option("--threads", threads, "worker threads; results do not depend on it")->check(CLI::PositiveNumber);
    sub->allow_extras();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const CLI::App* sub = app.get_subcommands().front();
    const std::string mode = sub->get_name();

    json doc = config_path.empty() ? json::object() : read_json_file(config_path);
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    apply_extras(doc, sub->remaining());
    if (doc.contains("mode") && doc.at("mode") != mode) {
      throw ConfigError("config mode '" + doc.at("mode").dump() + "' does not match subcommand '" + mode + "'");
    }
    doc["mode"] = mode;

    if (mode == "figure") {
      if (!doc.contains("figure")) throw ConfigError("figure mode needs a figure name (--figure 2a)");
      const json& f = doc.at("figure");
      const std::string name = f.is_string() ? f.get<std::string>() : f.dump();
      json merged = to_json(figure_presets(name));
      merged.merge_patch(doc);
      doc = std::move(merged);
    }

    RunConfig config = parse_run_config(doc);
    if (!output_path.empty()) config.output.path = output_path;
    if (config.output.path.empty()) throw ConfigError("no output path (set output.path or --output)");

    const RunOutcome outcome = execute(config, threads);
    write_file(config.output.path, outcome.csv);
    out << outcome.summary << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace jumpfb::cli
