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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "jumpfb/cli.hpp"

using namespace jumpfb;
using namespace jumpfb::cli;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

json local_doc(const std::string& mode) {
  json doc = json::parse(R"({
    "physics": {"omega": 0.4},
    "feedback": {"kind": "local", "lambda": 1.5707963267948966}
  })");
  doc["mode"] = mode;
  return doc;
}

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation run(std::vector<std::string> args) {
  args.insert(args.begin(), "jumpfb");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "jumpfb_test_cli";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  fs::remove(p);
  return p;
}

}  // namespace

TEST_CASE("config round trip is idempotent") {
  for (const char* name : {"2a", "2b", "2c", "2d", "3", "4"}) {
    const json first = to_json(figure_presets(name));
    const json second = to_json(parse_run_config(first));
    CHECK(first.dump() == second.dump());
  }
  json doc = local_doc("traj");
  doc["trajectories"] = {{"n", 5}, {"base_seed", 17}};
  doc["initial_state"] = "ee";
  const std::string once = to_json(parse_run_config(doc)).dump();
  CHECK(to_json(parse_run_config(json::parse(once))).dump() == once);
}

TEST_CASE("explicit initial matrices round trip") {
  json doc = local_doc("evolve");
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) row.push_back(json::array({i == j ? 0.25 : 0.0, 0.0}));
    rows.push_back(row);
  }
  doc["initial_state"] = rows;
  const RunConfig c = parse_run_config(doc);
  CHECK(c.initial_state.name == "matrix");
  CHECK((c.initial_state.density() - DensityMatrix::Identity() / 4.0).norm() == 0.0);
  CHECK(to_json(c)["initial_state"] == rows);
  CHECK_THROWS_AS(c.initial_state.pure_state(), ConfigError);
}

TEST_CASE("validation errors") {
  json doc = local_doc("steady");
  doc["physics"]["colour"] = 1;
  CHECK_THROWS_AS(parse_run_config(doc), ConfigError);

  doc = local_doc("steady");
  doc["extra"] = true;
  CHECK_THROWS_AS(parse_run_config(doc), ConfigError);

  doc = local_doc("steady");
  doc["physics"]["eta"] = 1.5;
  CHECK_THROWS_AS(parse_run_config(doc), ConfigError);

  doc = local_doc("traj");
  doc["trajectories"] = {{"n", 5}};
  CHECK_THROWS_AS(parse_run_config(doc), ConfigError);

  doc = local_doc("steady");
  doc["feedback"]["kind"] = "global";
  CHECK_THROWS_AS(parse_run_config(doc), ConfigError);

  doc = local_doc("steady");
  doc["initial_state"] = "plus";
  CHECK_THROWS_AS(parse_run_config(doc), ConfigError);

  CHECK_THROWS_AS(figure_presets("5"), ConfigError);
  CHECK_THROWS_AS(parse_mode("fit"), ConfigError);
}

TEST_CASE("figure presets") {
  CHECK(figure_presets("3").physics.omega == 3.0);
  CHECK(figure_presets("4").physics.omega == 0.4);
  const RunConfig c2 = figure_presets("2c");
  CHECK(c2.physics.gamma1 == 0.0);
  CHECK(c2.physics.gamma2 == 0.0);
  CHECK(c2.physics.feedback.kind == FeedbackKind::Local);
  CHECK(figure_presets("2a").physics.feedback.kind == FeedbackKind::Collective);
  CHECK(figure_presets("2b").physics.gamma1 == 0.01);
  CHECK(figure_presets("2d").physics.gamma2 == 0.01);

  const auto fig3 = figure_series(figure_presets("3"));
  REQUIRE(fig3.size() == 5);
  CHECK(fig3[4].first == "C3_control");
  CHECK(fig3[4].second.gamma_deph == 0.01);
  CHECK(fig3[0].second.feedback.kind == FeedbackKind::None);

  const auto fig4 = figure_series(figure_presets("4"));
  REQUIRE(fig4.size() == 4);
  CHECK(fig4[1].second.eta == 0.5);
  CHECK(fig4[3].second.gamma1 == 0.01);
  CHECK_THROWS_AS(figure_series(figure_presets("2a")), ConfigError);
}

TEST_CASE("dotted overrides") {
  json doc = json::object();
  set_dotted(doc, "physics.omega", 0.4);
  set_dotted(doc, "sweep.omega_axis.count", 3);
  CHECK(doc["physics"]["omega"] == 0.4);
  CHECK(doc["sweep"]["omega_axis"]["count"] == 3);
  CHECK_THROWS_AS(set_dotted(doc, "physics..omega", 1), ConfigError);
  CHECK_THROWS_AS(set_dotted(doc, "physics.omega.x", 1), ConfigError);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-0.25) == "-0.25");
  CHECK(std::stod(format_number(-2.5e-20)) == -2.5e-20);
}

TEST_CASE("steady output schema") {
  const RunOutcome r = execute(parse_run_config(local_doc("steady")));
  const auto l = lines(r.csv);
  REQUIRE(l.size() > 5);
  CHECK(l[0] == "name,value");
  const auto row = fields(l[1]);
  CHECK(row[0] == "concurrence");
  CHECK(std::stod(row[1]) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(l[4] == "null_dimension,1");
  CHECK(r.summary.find("concurrence=1.000000") != std::string::npos);
  CHECK(r.csv.find('\r') == std::string::npos);
}

TEST_CASE("evolve output schema") {
  json doc = local_doc("evolve");
  doc["time"] = {{"t_final", 1.0}, {"samples", 3}};
  const auto l = lines(execute(parse_run_config(doc)).csv);
  REQUIRE(l.size() == 4);
  CHECK(l[0] == "t,concurrence,fidelity,purity");
  CHECK(l[1] == "0,0,0,1");
  CHECK(fields(l[2])[0] == "0.5");
}

TEST_CASE("trajectory output schema") {
  json doc = local_doc("traj");
  doc["time"] = {{"t_final", 1.0}, {"samples", 3}, {"dt", 0.005}};
  doc["trajectories"] = {{"n", 8}, {"base_seed", 1}};
  const RunConfig c = parse_run_config(doc);
  const std::string a = execute(c, 1).csv;
  CHECK(a == execute(c, 2).csv);
  const auto l = lines(a);
  REQUIRE(l.size() == 4);
  CHECK(l[0] == "t,mean_concurrence,stderr,n");
  CHECK(l[1] == "0,0,0,8");
}

TEST_CASE("sweep output schema") {
  json doc = local_doc("sweep");
  doc["sweep"] = {{"omega_axis", {{"min", 0.1}, {"max", 0.2}, {"count", 2}}},
                  {"lambda_axis", {{"min", 1.0}, {"max", 2.0}, {"count", 3}}},
                  {"quantity", "fidelity"}};
  const std::string csv = execute(parse_run_config(doc)).csv;
  CHECK(csv == execute(parse_run_config(doc), 3).csv);
  const auto l = lines(csv);
  REQUIRE(l.size() == 7);
  CHECK(l[0] == "omega,lambda,fidelity,null_dimension,residual");
  const auto row = fields(l[1]);
  CHECK(row[0] == "0.10000000000000001");
  CHECK(row[1] == "1");
  CHECK(std::stod(row[2]) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(row[3] == "1");
  CHECK(std::stod(row[4]) <= 1e-9);
}

TEST_CASE("time-series figure output schema") {
  json doc = to_json(figure_presets("3"));
  doc["time"]["t_final"] = 1.0;
  doc["time"]["samples"] = 2;
  const auto l = lines(execute(parse_run_config(doc)).csv);
  REQUIRE(l.size() == 11);
  CHECK(l[0] == "t,concurrence,fidelity,purity,series_label");
  const auto row = fields(l[1]);
  CHECK(row[0] == "0");
  CHECK(std::stod(row[1]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(row[4] == "C1_nocontrol");
  CHECK(fields(l[10])[4] == "C3_control");
}

TEST_CASE("entry point exit codes") {
  const fs::path out = scratch("steady.csv");
  Invocation r = run({"steady", "--physics.omega", "0.4", "--feedback.kind", "local", "--feedback.lambda",
                      "1.5707963267948966", "--output", out.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("concurrence=1.000000") != std::string::npos);
  CHECK(fs::exists(out));

  const fs::path bad = scratch("bad.csv");
  r = run({"steady", "--physics.eta", "1.5", "--output", bad.string()});
  CHECK(r.code == kExitConfig);
  CHECK(!fs::exists(bad));

  r = run({"steady", "--config", scratch("missing.json").string(), "--output", bad.string()});
  CHECK(r.code == kExitIo);

  r = run({"steady", "--output", (scratch("no_such_dir") / "x.csv").string()});
  CHECK(r.code == kExitIo);

  r = run({"steady"});
  CHECK(r.code == kExitConfig);

  r = run({"figure", "--figure", "9", "--output", bad.string()});
  CHECK(r.code == kExitConfig);

  const fs::path cfg = scratch("mismatch.json");
  std::ofstream(cfg) << R"({"mode": "evolve"})";
  r = run({"steady", "--config", cfg.string(), "--output", bad.string()});
  CHECK(r.code == kExitConfig);

  r = run({"traj", "--trajectories.base_seed", "1", "--physics.omega", "0.4", "--time.dt", "0.5", "--time.t_final",
           "1", "--time.samples", "2", "--initial_state", "ee", "--output", bad.string()});
  CHECK(r.code == kExitNumerical);
}
