// Copyright 2026 The entdyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "entdyn/runner.hpp"

using namespace entdyn;
using namespace entdyn::runner;
using Catch::Matchers::ContainsSubstring;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("entdyn_runner_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig cfg(const std::string& experiment, nlohmann::json params, std::uint64_t seed = 3) {
  return RunConfig::from_json({{"schema_version", 1}, {"experiment", experiment}, {"master_seed", seed}, {"parameters", std::move(params)}});
}

void write_json(const std::filesystem::path& p, const nlohmann::json& j) { std::ofstream(p) << j.dump(2); }

}  // namespace

TEST_CASE("config round trip and validation", "[runner][config]") {
  const nlohmann::json j = {{"schema_version", 1},
                            {"experiment", "spin_glass"},
                            {"master_seed", 18446744073709551615ULL},
                            {"parameters", {{"N", 6}, {"t1", 30.5}, {"initial_state", "zero"}}},
                            {"output_dir", "x"}};
  const auto c = RunConfig::from_json(j);
  CHECK(c.to_json() == j);
  CHECK(RunConfig::from_json(nlohmann::json::parse(c.to_json().dump())).to_json() == j);

  CHECK_THROWS_WITH(RunConfig::from_json({{"experiment", "page"}}), ContainsSubstring("'schema_version'"));
  CHECK_THROWS_WITH(RunConfig::from_json({{"schema_version", 2}, {"experiment", "page"}}), ContainsSubstring("unsupported version"));
  CHECK_THROWS_WITH(RunConfig::from_json({{"schema_version", 1}, {"experiment", "nope"}}), ContainsSubstring("'experiment'"));
  CHECK_THROWS_WITH(RunConfig::from_json({{"schema_version", 1}, {"experiment", "page"}, {"extra", 1}}), ContainsSubstring("'extra'"));
  CHECK_THROWS_WITH(RunConfig::from_json({{"schema_version", 1}, {"experiment", "page"}, {"master_seed", -1}}),
                    ContainsSubstring("'master_seed'"));

  CHECK_THROWS_WITH(run_experiment(cfg("page", {{"d_a", 2}}), 1), ContainsSubstring("'d_b': required"));
  CHECK_THROWS_WITH(run_experiment(cfg("page", {{"d_a", 2}, {"d_b", "4"}}), 1), ContainsSubstring("'d_b': expected an integer"));
  CHECK_THROWS_WITH(run_experiment(cfg("page", {{"d_a", 4}, {"d_b", 2}}), 1), ContainsSubstring("'d_a'"));
  CHECK_THROWS_WITH(run_experiment(cfg("lattice", {{"N", 8}, {"typo", 1}}), 1), ContainsSubstring("'typo': unknown parameter"));
  CHECK_THROWS_WITH(run_experiment(cfg("spin_glass", {{"N", 6}, {"num_times", 19}}), 1), ContainsSubstring("time grid too coarse"));
  CHECK_THROWS_WITH(run_experiment(cfg("syk", {{"num_majorana", 7}}), 1), ContainsSubstring("'num_majorana'"));
  CHECK_THROWS_AS(run_experiment(cfg("lattice", {{"N", 14}}), 1), ResourceError);
  CHECK_THROWS_AS(run_experiment(cfg("spin_glass", {{"N", 20}}), 1), ResourceError);
}

TEST_CASE("page run writes the artifacts", "[runner][page]") {
  const auto dir = scratch("page");
  RunOptions opt;
  opt.out = dir.string();
  const auto o = run(cfg("page", {{"d_a", 2}, {"d_b", 2}, {"num_samples", 20000}}), opt);
  CHECK(o.exit_code == kExitPass);
  for (const char* f : {"report.json", "certificates.csv", "data.csv", "summary.txt"}) CHECK(std::filesystem::exists(dir / f));
  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["metrics"]["exact"].get<double>() == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(std::abs(report["metrics"]["z_score"].get<double>()) < 3.0);
  CHECK_FALSE(report["config"].contains("output_dir"));
  CHECK(slurp(dir / "summary.txt").find("z = ") != std::string::npos);
  CHECK(slurp(dir / "certificates.csv").rfind("theorem_id,kind,N,n,lhs,rhs,margin,stat_err,pass\n", 0) == 0);
  const auto data = slurp(dir / "data.csv");
  CHECK(std::count(data.begin(), data.end(), '\n') == 20001);
}

TEST_CASE("runs are deterministic across worker counts", "[runner][determinism]") {
  const std::vector<RunConfig> configs = {
      cfg("lattice", {{"N", 6}, {"n", 2}, {"num_states", 3}, {"num_times", 20}}),
      cfg("charge", {{"N", 6}, {"n", 2}, {"depth", 6}, {"num_states", 3}}),
      cfg("spin_glass", {{"N", 4}, {"n", 2}, {"num_disorder", 100}, {"num_times", 20}, {"time_sampling", "uniform_random"}}),
      cfg("thermo_curves", {{"N", 4}, {"num_disorder", 200}, {"beta_grid", {-0.2, 0.2}}}),
  };
  for (const auto& c : configs) {
    INFO(c.experiment);
    RunOptions a, b;
    a.out = scratch("det_a").string();
    b.out = scratch("det_b").string();
    b.jobs = 3;
    const auto oa = run(c, a);
    const auto ob = run(c, b);
    CHECK(oa.exit_code == kExitPass);
    CHECK(slurp(std::filesystem::path(a.out) / "report.json") == slurp(std::filesystem::path(b.out) / "report.json"));
    CHECK(slurp(std::filesystem::path(a.out) / "data.csv") == slurp(std::filesystem::path(b.out) / "data.csv"));
  }
  RunOptions s;
  s.out = scratch("det_seed").string();
  s.seed = 99;
  const auto o = run(configs[0], s);
  CHECK(o.report["config"]["master_seed"] == 99);
}

TEST_CASE("exit codes follow the failure kind", "[runner][exit]") {
  using bounds::CertificateReport;
  using bounds::CheckKind;
  const std::vector<CertificateReport> stat_fail = {CertificateReport::make("s", 1.0, 0.0, 0.0, 0.0, CheckKind::statistical),
                                                    CertificateReport::info("i", 1.0, 0.0)};
  CHECK(exit_code_for(stat_fail, false) == kExitPass);
  CHECK(exit_code_for(stat_fail, true) == kExitCertificateFailure);
  const std::vector<CertificateReport> exact_fail = {CertificateReport::make("e", 1.0, 0.0, 0.0, 0.0, CheckKind::exact)};
  CHECK(exit_code_for(exact_fail, false) == kExitCertificateFailure);
}

TEST_CASE("sweeps", "[runner][sweep]") {
  const auto dir = scratch("sweep_in");
  write_json(dir / "a.json", cfg("lattice", {{"N", 6}, {"energy_only", true}}).to_json());
  RunOptions opt;
  opt.out = scratch("sweep_out").string();
  CHECK_THROWS_WITH(sweep(dir, opt), ContainsSubstring("fewer than 3 sweep points"));
  write_json(dir / "b.json", cfg("lattice", {{"N", 8}, {"energy_only", true}}).to_json());
  write_json(dir / "c.json", cfg("lattice", {{"N", 10}, {"energy_only", true}, {"n", 3}}).to_json());
  CHECK_THROWS_WITH(sweep(dir, opt), ContainsSubstring("exactly one parameter"));
  write_json(dir / "c.json", cfg("lattice", {{"N", 10}, {"energy_only", true}}).to_json());
  write_json(dir / "d.json", cfg("lattice", {{"N", 12}, {"energy_only", true}}).to_json());
  const auto s = sweep(dir, opt);
  CHECK(s.axis == "N");
  CHECK(s.points.size() == 4);
  REQUIRE(s.trends.size() == 1);
  CHECK(s.trends[0].theorem_id == "energy_std_scaling");
  CHECK(s.trends[0].pass);
  CHECK(std::filesystem::exists(std::filesystem::path(opt.out) / "sweep_report.json"));
  CHECK(std::filesystem::exists(std::filesystem::path(opt.out) / "b" / "report.json"));
}
