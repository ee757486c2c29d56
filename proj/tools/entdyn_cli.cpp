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

// entdyn run <config.json> | entdyn sweep <dir>
// Exit codes: 0 pass, 1 certificate failure, 2 config error, 3 resource guard.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "entdyn/runner.hpp"

namespace {

using namespace entdyn;

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ResourceError& e) {
    std::cerr << "resource guard: " << e.what() << '\n';
    return runner::kExitResourceGuard;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return runner::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return runner::kExitCertificateFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement-dynamics certificate runner"};
  app.require_subcommand(1);

  runner::RunOptions opt;
  std::optional<std::uint64_t> seed;
  std::string out;
  int jobs = 1;
  bool strict = false;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Override the master seed");
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--jobs", jobs, "Parallel workers")->check(CLI::PositiveNumber);
    sub->add_flag("--strict", strict, "Statistical and trend failures also give a nonzero exit");
  };

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("config", config_path, "Config JSON")->required();
  common(run);

  std::string sweep_dir;
  auto* sweep = app.add_subcommand("sweep", "Run every config in a directory and fit the scaling");
  sweep->add_option("dir", sweep_dir, "Directory of config JSON files")->required();
  common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : runner::kExitConfigError;
  }
  opt.seed = seed;
  opt.out = out;
  opt.jobs = jobs;
  opt.strict = strict;

  if (*run) {
    return guarded([&] {
      const auto o = runner::run(runner::RunConfig::load(config_path), opt);
      std::cout << runner::summary_text(o.config, o.result, opt.strict) << "artifacts: " << o.dir.string() << '\n';
      return o.exit_code;
    });
  }
  return guarded([&] {
    const auto s = runner::sweep(sweep_dir, opt);
    std::cout << "sweep of " << s.experiment << " over " << s.axis << " (" << s.points.size() << " points)\n";
    for (const auto& t : s.trends)
      std::cout << "  " << t.theorem_id << " [" << bounds::to_string(t.kind) << "]: lhs " << t.lhs << ", rhs " << t.rhs << " -> "
                << (t.kind == bounds::CheckKind::info ? "info" : (t.pass ? "PASS" : "FAIL")) << '\n';
    return s.exit_code;
  });
}
