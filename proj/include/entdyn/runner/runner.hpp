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

#ifndef ENTDYN_RUNNER_RUNNER_HPP
#define ENTDYN_RUNNER_RUNNER_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "entdyn/runner/experiments.hpp"

namespace entdyn::runner {

namespace fs = std::filesystem;

enum ExitCode : int { kExitPass = 0, kExitCertificateFailure = 1, kExitConfigError = 2, kExitResourceGuard = 3 };

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides master_seed
  std::string out;                    // overrides output_dir
  int jobs = 1;
  bool strict = false;  // statistical and trend failures also fail the run
};

struct RunOutcome {
  RunConfig config;  // after overrides
  RunResult result;
  nlohmann::json report;
  fs::path dir;
  int exit_code = kExitPass;
};

inline int exit_code_for(const std::vector<CertificateReport>& reports, bool strict) {
  return bounds::count_failures(reports, strict) == 0 ? kExitPass : kExitCertificateFailure;
}

inline nlohmann::json outcome_json(const std::vector<CertificateReport>& reports, bool strict) {
  std::map<std::string, std::pair<int, int>> by_kind;  // kind -> (passed, total)
  for (const auto& r : reports) {
    auto& e = by_kind[bounds::to_string(r.kind)];
    e.second += 1;
    e.first += r.pass ? 1 : 0;
  }
  nlohmann::json k = nlohmann::json::object();
  for (const auto& [name, pt] : by_kind) k[name] = {{"passed", pt.first}, {"total", pt.second}};
  return {{"by_kind", k},
          {"exact_failures", bounds::count_failures(reports, false)},
          {"all_failures", bounds::count_failures(reports, true)},
          {"strict", strict},
          {"pass", exit_code_for(reports, strict) == kExitPass}};
}

/// The report contains no paths, timings or worker counts, so equal configs
/// and seeds give byte-identical files.
inline nlohmann::json build_report(const RunConfig& cfg, const RunResult& r, bool strict) {
  nlohmann::json c = cfg.to_json();
  c.erase("output_dir");
  return {{"schema_version", kSchemaVersion},
          {"experiment", cfg.experiment},
          {"config", c},
          {"reports", bounds::reports_to_json(r.reports)},
          {"metrics", r.metrics},
          {"stand_ins", r.stand_ins},
          {"outcome", outcome_json(r.reports, strict)}};
}

inline std::string certificates_csv(const std::vector<CertificateReport>& reports) {
  Csv t;
  t.header = {"theorem_id", "kind", "N", "n", "lhs", "rhs", "margin", "stat_err", "pass"};
  auto field = [](const nlohmann::json& inst, const char* key) -> std::string {
    if (!inst.is_object() || !inst.contains(key)) return "";
    const auto& v = inst[key];
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return num(v.get<double>());
    return "";
  };
  for (const auto& r : reports) {
    std::string big_n = field(r.instance, "N");
    if (big_n.empty()) big_n = field(r.instance, "N_majorana");
    t.add({r.theorem_id, bounds::to_string(r.kind), big_n, field(r.instance, "n"), num(r.lhs), num(r.rhs), num(r.margin),
           num(r.statistical_error), r.pass ? "true" : "false"});
  }
  return t.str();
}

inline std::string summary_text(const RunConfig& cfg, const RunResult& r, bool strict) {
  std::ostringstream o;
  o << "experiment " << cfg.experiment << ", master seed " << cfg.master_seed << "\n\n";
  std::size_t w = 10;
  for (const auto& rep : r.reports) w = std::max(w, rep.theorem_id.size());
  o << std::left << std::setw(static_cast<int>(w) + 2) << "check" << std::setw(13) << "kind" << std::setw(14) << "lhs" << std::setw(14)
    << "rhs" << std::setw(14) << "margin" << std::setw(12) << "stat_err"
    << "result\n";
  for (const auto& rep : r.reports) {
    o << std::left << std::setw(static_cast<int>(w) + 2) << rep.theorem_id << std::setw(13) << bounds::to_string(rep.kind)
      << std::setprecision(6) << std::setw(14) << rep.lhs << std::setw(14) << rep.rhs << std::setw(14) << rep.margin << std::setw(12)
      << rep.statistical_error << (rep.kind == CheckKind::info ? "info" : (rep.pass ? "PASS" : "FAIL")) << '\n';
  }
  const auto oc = outcome_json(r.reports, strict);
  o << '\n';
  for (const auto& [kind, v] : oc["by_kind"].items())
    o << kind << ": " << v["passed"].get<int>() << "/" << v["total"].get<int>() << " pass\n";
  for (const auto& line : r.summary) o << line << '\n';
  o << (oc["pass"].get<bool>() ? "overall: PASS" : "overall: FAIL") << (strict ? " (strict)" : "") << '\n';
  return o.str();
}

inline void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("output_dir", "cannot write '" + p.string() + "'");
  out << text;
}

inline fs::path output_dir_for(const RunConfig& cfg, const RunOptions& opt) {
  if (!opt.out.empty()) return opt.out;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  return fs::path("results") / cfg.experiment;
}

/// Runs one config and writes report.json, certificates.csv, data.csv and
/// summary.txt into the output directory.
inline RunOutcome run(RunConfig cfg, const RunOptions& opt) {
  if (opt.jobs < 1) throw ConfigError("--jobs", "must be at least 1");
  if (opt.seed) cfg.master_seed = *opt.seed;
  RunOutcome o;
  o.dir = output_dir_for(cfg, opt);
  o.result = run_experiment(cfg, opt.jobs);
  o.report = build_report(cfg, o.result, opt.strict);
  o.exit_code = exit_code_for(o.result.reports, opt.strict);
  std::error_code ec;
  fs::create_directories(o.dir, ec);
  if (ec) throw ConfigError("output_dir", "cannot create '" + o.dir.string() + "': " + ec.message());
  write_file(o.dir / "report.json", o.report.dump(2) + "\n");
  write_file(o.dir / "certificates.csv", certificates_csv(o.result.reports));
  write_file(o.dir / "data.csv", o.result.data.str());
  write_file(o.dir / "summary.txt", summary_text(cfg, o.result, opt.strict));
  o.config = std::move(cfg);
  return o;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepOutcome {
  std::string experiment;
  std::string axis;
  std::vector<RunOutcome> points;  // sorted by the axis value
  std::vector<CertificateReport> trends;
  nlohmann::json report;
  int exit_code = kExitPass;
};

/// The sweep axis is the single parameter whose value differs between the
/// configs; everything else must agree.
inline std::string sweep_axis(const std::vector<RunConfig>& configs) {
  const auto& first = configs.front();
  for (const auto& c : configs) {
    if (c.experiment != first.experiment) throw ConfigError("experiment", "sweep configs mix experiments");
    if (c.master_seed != first.master_seed) throw ConfigError("master_seed", "sweep configs must share the master seed");
  }
  std::vector<std::string> keys;
  for (const auto& c : configs)
    for (const auto& [k, v] : c.parameters.items())
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  std::vector<std::string> differing;
  for (const auto& k : keys) {
    for (const auto& c : configs) {
      const auto a = first.parameters.contains(k) ? first.parameters[k] : nlohmann::json();
      const auto b = c.parameters.contains(k) ? c.parameters[k] : nlohmann::json();
      if (a != b) {
        differing.push_back(k);
        break;
      }
    }
  }
  if (differing.size() != 1) {
    std::string list;
    for (const auto& k : differing) list += (list.empty() ? "" : ", ") + k;
    throw ConfigError("parameters", "sweep configs must differ in exactly one parameter (found: " + (list.empty() ? "none" : list) + ")");
  }
  for (const auto& c : configs)
    if (!c.parameters.contains(differing[0]) || !c.parameters[differing[0]].is_number())
      throw ConfigError(differing[0], "sweep axis must be numeric in every config");
  return differing[0];
}

inline std::vector<double> metric_series(const std::vector<RunOutcome>& pts, const char* key) {
  std::vector<double> v;
  for (const auto& p : pts) v.push_back(p.result.metrics.at(key).get<double>());
  return v;
}

inline std::vector<CertificateReport> sweep_trends(const std::string& experiment, const std::string& axis,
                                                   const std::vector<RunOutcome>& pts) {
  std::vector<double> x;
  for (const auto& p : pts) x.push_back(p.config.parameters[axis].get<double>());
  std::vector<CertificateReport> out;
  if (experiment == "lattice_ti_equilibration") {
    if (axis != "N") throw ConfigError(axis, "equilibration sweeps run over N");
    std::vector<bounds::TiCertificate> certs;
    for (const auto& p : pts) certs.push_back(*p.result.ti);
    return bounds::ti_equilibration_trends(certs);
  }
  if (experiment == "lattice") {
    if (axis != "N") throw ConfigError(axis, "lattice sweeps run over N");
    std::vector<double> lx, ly;
    const auto sd = metric_series(pts, "energy_std");
    for (std::size_t i = 0; i < x.size(); ++i) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(sd[i]));
    }
    const auto f = stats::fit_line(lx, ly);
    const nlohmann::json inst = {{"N", x}, {"energy_std", sd}, {"slope", f.slope}, {"slope_ci", {f.slope_ci_low, f.slope_ci_high}},
                                 {"confidence", f.confidence}};
    out.push_back(CertificateReport::make("energy_std_scaling", std::abs(f.slope - 0.5), 0.15, 0.0, 0.0, CheckKind::trend, inst,
                                          "log-log slope of the energy std against N, expected 0.5 +- 0.15"));
    return out;
  }
  if (experiment == "spin_glass" || experiment == "syk") {
    const auto h = metric_series(pts, "hypothesis_mean_abs");
    const auto meas = metric_series(pts, "measured_time_max");
    const auto top = metric_series(pts, "entropy_max");
    const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
    std::vector<double> deficit;
    for (std::size_t i = 0; i < meas.size(); ++i) deficit.push_back(top[i] - meas[i]);
    const auto f = stats::fit_line(x, deficit);
    const nlohmann::json inst = {{axis, x}, {"hypothesis_mean_abs", h}, {"deficit", deficit}, {"deficit_slope", f.slope},
                                 {"deficit_slope_ci", {f.slope_ci_low, f.slope_ci_high}}};
    out.push_back(CertificateReport::make("hypothesis_constant_band", *hi / *lo, 2.0, 0.0, 0.0, CheckKind::trend, inst,
                                          "max/min of E|<psi|H|psi>| across the sweep stays within a factor 2"));
    out.push_back(CertificateReport::info("deficit_fit", f.slope, 0.0, inst, "slope of (maximum - measured time-max entropy) against the axis"));
    return out;
  }
  if (experiment == "page") {
    const auto var = metric_series(pts, "variance");
    bool decreasing = true;
    for (std::size_t i = 1; i < var.size(); ++i) decreasing = decreasing && var[i] < var[i - 1];
    out.push_back(CertificateReport::flag("page_concentration", decreasing, CheckKind::trend, {{axis, x}, {"variance", var}},
                                          "sample variance of S(rho_A) decreases along the axis"));
    return out;
  }
  if (experiment == "charge") {
    const auto m = metric_series(pts, "max_lhs");
    std::vector<double> inv, deficit;
    for (std::size_t i = 0; i < x.size(); ++i) {
      inv.push_back(1.0 / x[i]);
      deficit.push_back(pts[i].result.metrics.at("n").get<double>() * kLn2 - m[i]);
    }
    const auto f = stats::fit_line(inv, deficit);
    out.push_back(CertificateReport::info("charge_deficit_fit", f.slope, 0.0,
                                          {{axis, x}, {"deficit", deficit}, {"slope", f.slope}, {"slope_ci", {f.slope_ci_low, f.slope_ci_high}}},
                                          "n ln 2 - max entropy fitted against 1/N"));
    return out;
  }
  throw ConfigError("experiment", "no sweep trend is defined for '" + experiment + "'");
}

/// Runs every *.json config in `dir` (at least 3), one subdirectory each,
/// then fits the declared scaling and writes sweep_report.json.
inline SweepOutcome sweep(const fs::path& dir, const RunOptions& opt) {
  if (!fs::is_directory(dir)) throw ConfigError("<dir>", "'" + dir.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.size() < 3) throw InvalidArgument("fewer than 3 sweep points (found " + std::to_string(files.size()) + ")");
  std::vector<RunConfig> configs;
  for (const auto& f : files) {
    configs.push_back(RunConfig::load(f.string()));
    if (opt.seed) configs.back().master_seed = *opt.seed;
  }
  SweepOutcome s;
  s.experiment = configs.front().experiment;
  s.axis = sweep_axis(configs);
  std::vector<std::size_t> order(configs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return configs[a].parameters[s.axis].get<double>() < configs[b].parameters[s.axis].get<double>();
  });
  const fs::path root = opt.out.empty() ? fs::path("results") / ("sweep_" + s.experiment) : fs::path(opt.out);
  for (std::size_t i : order) {
    RunOptions po = opt;
    po.out = (root / files[i].stem()).string();
    s.points.push_back(run(configs[i], po));
  }
  s.trends = sweep_trends(s.experiment, s.axis, s.points);
  int code = exit_code_for(s.trends, opt.strict);
  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t k = 0; k < s.points.size(); ++k) {
    const auto& p = s.points[k];
    code = std::max(code, p.exit_code);
    pts.push_back({{"config", files[order[k]].filename().string()},
                   {"axis_value", p.config.parameters[s.axis]},
                   {"metrics", p.result.metrics},
                   {"outcome", p.report["outcome"]}});
  }
  s.exit_code = code;
  s.report = {{"schema_version", kSchemaVersion}, {"experiment", s.experiment}, {"axis", s.axis},
              {"points", pts},                    {"trends", bounds::reports_to_json(s.trends)},
              {"outcome", outcome_json(s.trends, opt.strict)}};
  fs::create_directories(root);
  write_file(root / "sweep_report.json", s.report.dump(2) + "\n");
  write_file(root / "sweep_trends.csv", certificates_csv(s.trends));
  return s;
}

}  // namespace entdyn::runner

#endif  // ENTDYN_RUNNER_RUNNER_HPP
