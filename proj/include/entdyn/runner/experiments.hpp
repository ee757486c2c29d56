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

#ifndef ENTDYN_RUNNER_EXPERIMENTS_HPP
#define ENTDYN_RUNNER_EXPERIMENTS_HPP

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "entdyn/bounds.hpp"
#include "entdyn/models.hpp"
#include "entdyn/runner/config.hpp"
#include "entdyn/sampling.hpp"

namespace entdyn::runner {

using bounds::CertificateReport;
using bounds::CheckKind;
using qcore::PureState;

/// Shortest round-trip text for a double; the CSV and summary contract.
inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }

  std::string str() const {
    std::ostringstream o;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << r[i];
      o << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return o.str();
  }
};

struct RunResult {
  std::vector<CertificateReport> reports;
  nlohmann::json metrics = nlohmann::json::object();
  nlohmann::json stand_ins = nlohmann::json::object();  // finite substitutes for limits
  Csv data;
  std::vector<std::string> summary;
  std::optional<bounds::TiCertificate> ti;
};

/// Independent seed streams derived from the master seed.
enum class Stream : std::uint64_t { model = 0, states = 1, disorder = 2, times = 3, energies = 4 };

inline std::uint64_t stream_seed(std::uint64_t master, Stream s) { return derive_seed(master, static_cast<std::uint64_t>(s), 0); }

/// "zero", "haar_product", or an integer basis index.
inline PureState initial_state(Params& p, int num_qubits, std::uint64_t seed, nlohmann::json& echo) {
  const nlohmann::json spec = p.has("initial_state") ? p.raw("initial_state") : nlohmann::json("zero");
  echo = spec;
  if (spec.is_string()) {
    const auto s = spec.get<std::string>();
    if (s == "zero") return PureState::basis(num_qubits, 0);
    if (s == "haar_product") return sampling::sample_haar_product_state(num_qubits, seed);
  } else if (spec.is_number_integer() && (spec.is_number_unsigned() || spec.get<std::int64_t>() >= 0)) {
    const auto idx = spec.get<std::uint64_t>();
    if (idx >= dimension_of(num_qubits)) throw ConfigError("initial_state", "basis index out of range");
    return PureState::basis(num_qubits, idx);
  }
  throw ConfigError("initial_state", "expected \"zero\", \"haar_product\" or a basis index");
}

inline bounds::TimePolicy time_policy(Params& p, double t1_default, int count_default, std::uint64_t seed) {
  bounds::TimePolicy t;
  const auto s = p.get_or<std::string>("time_sampling", "linear");
  if (s == "linear") t.sampling = dynamics::TimeSampling::linear;
  else if (s == "uniform_random") t.sampling = dynamics::TimeSampling::uniform_random;
  else throw ConfigError("time_sampling", "expected \"linear\" or \"uniform_random\"");
  t.t0 = p.get_or<double>("t0", 0.0);
  t.t1 = p.get_or<double>("t1", t1_default);
  t.count = p.get_or<int>("num_times", count_default);
  t.seed = seed;
  if (t.count < bounds::kMinTimePoints) t.validate();  // named "time grid too coarse" error
  if (!(t.t1 > t.t0)) throw ConfigError("t1", "must exceed t0");
  return t;
}

inline int positive(Params& p, const std::string& key, int fallback) {
  const int v = p.get_or<int>(key, fallback);
  if (v < 1) throw ConfigError(key, "must be positive");
  return v;
}

inline int required_positive(Params& p, const std::string& key) {
  const int v = p.get<int>(key);
  if (v < 1) throw ConfigError(key, "must be positive");
  return v;
}

// ---------------------------------------------------------------------------

inline RunResult run_page(const RunConfig& cfg, Params& p, int jobs) {
  const int da = required_positive(p, "d_a"), db = required_positive(p, "d_b");
  const int samples = positive(p, "num_samples", 100000);
  p.finish();
  if (da > db) throw ConfigError("d_a", "must not exceed d_b");
  if (static_cast<std::uint64_t>(da) * static_cast<std::uint64_t>(db) > dimension_of(kMaxDenseQubits))
    throw ResourceError("page: d_a d_b exceeds the dense limit 2^" + std::to_string(kMaxDenseQubits));
  const std::uint64_t seed = stream_seed(cfg.master_seed, Stream::states);
  const auto s = parallel_map(static_cast<std::size_t>(samples), jobs, [&](std::size_t i) {
    return qcore::von_neumann_entropy(sampling::sample_haar_bipartite(da, db, derive_seed(seed, i)).reduced_a());
  });
  RunResult r;
  const double exact = bounds::page_mean_entropy(da, db);
  const auto est = stats::estimate_mean(s);
  const double z = est.std_error > 0.0 ? (est.mean - exact) / est.std_error : 0.0;
  const nlohmann::json inst = {{"d_a", da}, {"d_b", db}, {"samples", samples}, {"seed", seed}};
  r.reports.push_back(CertificateReport::make("page_mean", std::abs(est.mean - exact), 0.0, 0.0, est.std_error, CheckKind::statistical, inst,
                                              "|Monte Carlo mean - exact harmonic sum| within 3 standard errors"));
  r.reports.push_back(CertificateReport::make("page_below_maximum", exact, std::log(static_cast<double>(da)), tol::kExact, 0.0,
                                              CheckKind::exact, inst, "exact mean against ln d_A"));
  bounds::InequalityTally ceiling("entropy_ceiling", 1e-8);
  for (double x : s) ceiling.add(x, std::log(static_cast<double>(da)));
  r.reports.push_back(ceiling.report(inst));
  r.metrics = {{"mean", est.mean}, {"std_error", est.std_error}, {"variance", est.stddev * est.stddev}, {"exact", exact}, {"z_score", z}};
  r.stand_ins = {{"haar_samples", samples}};
  r.data.header = {"sample", "entropy"};
  for (std::size_t i = 0; i < s.size(); ++i) r.data.add({std::to_string(i), num(s[i])});
  r.summary.push_back("mean S(rho_A) = " + num(est.mean) + " +- " + num(est.std_error) + " vs exact " + num(exact) + " (z = " + num(z) + ")");
  return r;
}

inline RunResult run_lattice(const RunConfig& cfg, Params& p, int jobs) {
  const int big_n = required_positive(p, "N");
  const int n = positive(p, "n", 2);
  const int states = positive(p, "num_states", 20);
  const double t0 = p.get_or<double>("t0", 0.0), t1 = p.get_or<double>("t1", 20.0);
  const int times = positive(p, "num_times", 50);
  const bool ti = p.get_or<bool>("translationally_invariant", false);
  const bool corollary = p.get_or<bool>("corollary", false);
  const int energy_samples = p.get_or<int>("energy_samples", 200);
  const double c = p.get_or<double>("energy_threshold", bounds::kEnergyThresholdC);
  const bool energy_only = p.get_or<bool>("energy_only", false);
  p.finish();
  require_dense_size(big_n);
  if (corollary && !ti) throw ConfigError("corollary", "requires translationally_invariant = true");
  if (energy_samples < sampling::kMinEnergySamples) throw ConfigError("energy_samples", "at least 100 required");
  if (!(t1 > t0)) throw ConfigError("t1", "must exceed t0");

  RunResult r;
  const auto chain = models::build_lattice_chain(
      {.num_qubits = big_n, .translationally_invariant = ti, .seed = stream_seed(cfg.master_seed, Stream::model)});
  sampling::EnsembleSpec ens{.num_qubits = big_n, .seed = stream_seed(cfg.master_seed, Stream::energies), .num_samples = energy_samples};
  const auto es = sampling::energy_statistics(chain.hamiltonian, ens, c, jobs);
  nlohmann::json einst = {{"N", big_n}, {"energy", es.to_json()}};
  r.reports.push_back(CertificateReport::info("lattice_energy_statistics", es.stddev, std::sqrt(static_cast<double>(big_n)), einst,
                                              "std of <Psi|H|Psi> over Haar product states (lhs) against sqrt(N) (rhs)"));
  r.metrics = {{"N", big_n}, {"energy_std", es.stddev}, {"energy_mean_abs", es.abs_value.mean},
               {"energy_fraction_above", es.fraction_above}};
  r.summary.push_back("energy std over " + std::to_string(energy_samples) + " Haar product states: " + num(es.stddev) +
                      ", Pr(|E| >= " + num(es.threshold) + ") = " + num(es.fraction_above));
  r.stand_ins = {{"energy_samples", energy_samples}};
  if (energy_only) {
    r.data.header = {"N", "energy_std", "energy_mean_abs", "fraction_above"};
    r.data.add({std::to_string(big_n), num(es.stddev), num(es.abs_value.mean), num(es.fraction_above)});
    return r;
  }

  const auto grid = dynamics::TimeGrid::linear(t0, t1, times);
  const std::uint64_t sseed = stream_seed(cfg.master_seed, Stream::states);
  const auto suite = bounds::lat_certificate_suite(chain, n, states, sseed, grid, jobs);
  for (auto& rep : suite.reports()) r.reports.push_back(std::move(rep));
  if (corollary)
    for (auto& rep : bounds::lat_corollary_certificate(chain, n, states, sseed, grid, jobs)) r.reports.push_back(std::move(rep));
  double max_lhs = 0.0;
  r.data.header = {"state", "t", "lhs", "rhs", "energy_rhs", "two_site_avg_rhs", "sum_eps", "energy"};
  for (std::size_t i = 0; i < suite.runs.size(); ++i) {
    max_lhs = std::max(max_lhs, suite.runs[i].max_lhs);
    for (const auto& pt : suite.runs[i].points)
      r.data.add({std::to_string(i), num(pt.t), num(pt.lhs), num(pt.rhs), num(pt.energy_rhs), num(pt.two_site_avg_rhs), num(pt.sum_eps),
                  num(pt.energy)});
  }
  r.metrics["max_lhs"] = max_lhs;
  r.metrics["n"] = n;
  r.stand_ins["time_grid"] = {{"t0", t0}, {"t1", t1}, {"count", times}};
  r.stand_ins["num_states"] = states;
  r.summary.push_back("max over states and times of E_{|A|=" + std::to_string(n) + "} S = " + num(max_lhs) + " (n ln 2 = " +
                      num(n * kLn2) + ")");
  return r;
}

inline RunResult run_ti(const RunConfig& cfg, Params& p, int jobs) {
  const int big_n = required_positive(p, "N");
  const int n = positive(p, "n", 1);
  const int states = positive(p, "num_states", 200);
  const double tau = p.get_or<double>("tau", 0.0);
  const int times = positive(p, "num_times", 100);
  p.finish();
  require_dense_size(big_n);
  const auto chain = bounds::build_ti_chain(big_n, stream_seed(cfg.master_seed, Stream::model));
  auto cert = bounds::theorem_ti_equilibration_certificate(chain, n, states, tau, times, stream_seed(cfg.master_seed, Stream::states), jobs);
  RunResult r;
  r.reports = cert.reports;
  r.metrics = {{"N", big_n},
               {"n", n},
               {"mean_log_deff", cert.log_deff.mean},
               {"mean_log_deff_std_error", cert.log_deff.std_error},
               {"mean_entropy", cert.entropy.mean},
               {"mean_entropy_std_error", cert.entropy.std_error},
               {"deficit", cert.deficit},
               {"eigenstate_mean_purity", cert.floor.mean_purity},
               {"eigenstate_purity_bound", cert.floor.purity_bound}};
  r.stand_ins = {{"num_states", states}, {"num_times", times}, {"tau", cert.instance.value("tau", tau)}};
  r.data.header = {"state", "deff", "mean_entropy", "infinite_entropy", "concavity_floor", "trace_distance", "bound"};
  for (std::size_t i = 0; i < cert.runs.size(); ++i) {
    const auto& s = cert.runs[i];
    r.data.add({std::to_string(i), num(s.deff), num(s.mean_entropy), num(s.infinite_entropy), num(s.concavity_floor),
                num(s.distance.estimate.mean), num(s.distance.bound)});
  }
  r.summary.push_back("E ln D_eff = " + num(cert.log_deff.mean) + ", deficit n ln 2 - E S = " + num(cert.deficit));
  r.ti = std::move(cert);
  return r;
}

inline RunResult run_charge(const RunConfig& cfg, Params& p, int jobs) {
  const int big_n = required_positive(p, "N");
  const int n = positive(p, "n", 2);
  const int depth = p.get_or<int>("depth", 20);
  const int m = positive(p, "m", big_n);
  const int states = positive(p, "num_states", 20);
  p.finish();
  require_dense_size(big_n);
  if (depth < 0) throw ConfigError("depth", "must be non-negative");
  if (2 * n > big_n) throw ConfigError("n", "must not exceed N/2");
  const auto circuit = models::build_charge_circuit({big_n, depth, stream_seed(cfg.master_seed, Stream::model)});
  const auto windows = bounds::window_subsystems(big_n, n, m);
  const auto suite = bounds::charge_certificate_suite(circuit, n, windows, states, stream_seed(cfg.master_seed, Stream::states), jobs);
  RunResult r;
  r.reports = suite.reports();
  double max_lhs = 0.0;
  r.data.header = {"state", "layer", "lhs", "rhs", "sharp_rhs", "sum_abs_z", "charge"};
  for (std::size_t i = 0; i < suite.runs.size(); ++i) {
    max_lhs = std::max(max_lhs, suite.runs[i].max_lhs);
    for (const auto& pt : suite.runs[i].points)
      r.data.add({std::to_string(i), std::to_string(pt.layer), num(pt.lhs), num(pt.rhs), num(pt.sharp_rhs), num(pt.sum_abs_z), num(pt.charge)});
  }
  r.metrics = {{"N", big_n}, {"n", n}, {"max_lhs", max_lhs}};
  r.stand_ins = {{"depth", depth}, {"num_states", states}, {"windows", m}};
  r.summary.push_back("max over states and layers of the window-average entropy = " + num(max_lhs) + " (n ln 2 = " + num(n * kLn2) + ")");
  return r;
}

inline void disorder_outputs(RunResult& r, const bounds::DisorderCertificate& c, const bounds::TimePolicy& policy, int num_disorder) {
  r.reports.insert(r.reports.end(), c.reports.begin(), c.reports.end());
  r.metrics["hypothesis_mean_abs"] = c.hypothesis.abs_value.mean;
  r.metrics["hypothesis_std_error"] = c.hypothesis.abs_value.std_error;
  r.metrics["closed_form"] = c.closed_form;
  r.metrics["measured_time_max"] = c.measured.mean;
  r.metrics["measured_std_error"] = c.measured.std_error;
  r.metrics["thermal_ceiling"] = c.thermal.mean_entropy;
  r.metrics["beta"] = c.thermal.beta;
  r.metrics["entropy_max"] = c.entropy_max;
  r.stand_ins = {{"time_policy", policy.to_json()}, {"num_disorder", num_disorder}};
  r.data.header = {"sample", "seed", "energy", "time_max", "t_at_max", "block_energy", "identity_error", "max_entropy"};
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    const auto& row = c.rows[i];
    r.data.add({std::to_string(i), std::to_string(row.seed), num(row.energy), num(row.time_max), num(row.t_at_max), num(row.block_energy),
                num(row.identity_error), num(row.max_entropy)});
  }
  r.summary.push_back("E|<psi|H|psi>| = " + num(c.hypothesis.abs_value.mean) + " +- " + num(c.hypothesis.abs_value.std_error) +
                      " (closed form " + num(c.closed_form) + ")");
  r.summary.push_back("disorder mean of time-max entropy = " + num(c.measured.mean) + " +- " + num(c.measured.std_error) +
                      ", thermal ceiling " + num(c.thermal.mean_entropy) + " at beta " + num(c.thermal.beta) + ", maximum " +
                      num(c.entropy_max));
}

inline RunResult run_spin_glass(const RunConfig& cfg, Params& p, int jobs) {
  const int big_n = required_positive(p, "N");
  const int n = positive(p, "n", 2);
  const int disorder = positive(p, "num_disorder", 200);
  const auto policy = time_policy(p, 30.0, 50, stream_seed(cfg.master_seed, Stream::times));
  RunResult r;
  nlohmann::json echo;
  require_dense_size(big_n);
  const PureState psi = initial_state(p, big_n, stream_seed(cfg.master_seed, Stream::states), echo);
  p.finish();
  const auto c = bounds::theorem_sg_certificate(big_n, n, disorder, psi, policy, stream_seed(cfg.master_seed, Stream::disorder), jobs);
  disorder_outputs(r, c, policy, disorder);
  r.metrics["N"] = big_n;
  r.metrics["n"] = n;
  r.metrics["initial_state"] = echo;
  return r;
}

inline RunResult run_syk(const RunConfig& cfg, Params& p, int jobs) {
  const int nm = required_positive(p, "num_majorana");
  const int n = positive(p, "n", 4);
  const int disorder = positive(p, "num_disorder", 100);
  const double engf = p.get_or<double>("engf_threshold", bounds::kEngfThreshold);
  const auto policy = time_policy(p, 30.0, 50, stream_seed(cfg.master_seed, Stream::times));
  if (nm % 2 != 0) throw ConfigError("num_majorana", "must be even");
  require_dense_size(nm / 2);
  nlohmann::json echo;
  const PureState psi = initial_state(p, nm / 2, stream_seed(cfg.master_seed, Stream::states), echo);
  p.finish();
  RunResult r;
  const double anti = models::majorana_anticommutation_error(nm);
  r.reports.push_back(CertificateReport::make("majorana_anticommutation", anti, 0.0, 1e-10, 0.0, CheckKind::exact, {{"N_majorana", nm}},
                                              "max entry of {chi_a, chi_b} - 2 delta_ab I"));
  const auto c = bounds::theorem_syk_certificate(nm, n, disorder, psi, policy, stream_seed(cfg.master_seed, Stream::disorder), jobs, engf);
  disorder_outputs(r, c, policy, disorder);
  r.metrics["N"] = nm;
  r.metrics["n"] = n;
  r.metrics["initial_state"] = echo;
  r.metrics["engf_fraction"] = c.instance.value("engf_fraction", 0.0);
  r.summary.push_back("fraction of quartic expectations with |<chi chi chi chi>| >= " + num(engf) + ": " +
                      num(c.instance.value("engf_fraction", 0.0)));
  return r;
}

inline RunResult run_thermo(const RunConfig& cfg, Params& p, int jobs) {
  const auto kind_s = p.get_or<std::string>("kind", "spin_glass");
  models::DisorderKind kind;
  if (kind_s == "spin_glass") kind = models::DisorderKind::spin_glass;
  else if (kind_s == "syk") kind = models::DisorderKind::syk;
  else throw ConfigError("kind", "expected \"spin_glass\" or \"syk\"");
  const int sites = required_positive(p, "N");
  const auto grid = p.get_or<std::vector<double>>("beta_grid", {-1.0, -0.5, -0.2, -0.1, -0.05, 0.05, 0.1, 0.2, 0.5, 1.0});
  const int disorder = positive(p, "num_disorder", 1000);
  const bool pairing = p.get_or<bool>("check_pairing", true);
  const int nq = kind == models::DisorderKind::spin_glass ? sites : sites / 2;
  require_dense_size(nq);
  nlohmann::json echo;
  const PureState psi = initial_state(p, nq, stream_seed(cfg.master_seed, Stream::states), echo);
  p.finish();
  const auto c = bounds::thermo_curves(kind, sites, grid, disorder, psi, stream_seed(cfg.master_seed, Stream::disorder), jobs, pairing);
  RunResult r;
  r.reports = c.reports;
  r.metrics = {{"N", sites}, {"plus_count", c.plus_count}, {"minus_count", c.minus_count}, {"c_fit", c.c_fit}, {"initial_state", echo}};
  r.stand_ins = {{"num_disorder", disorder}, {"beta_grid", grid}};
  r.data.header = {"beta", "energy", "energy_std_error", "entropy", "entropy_std_error", "partition", "partition_std_error", "band"};
  for (const auto& row : c.rows)
    r.data.add({num(row.beta), num(row.energy.mean), num(row.energy.std_error), num(row.entropy.mean), num(row.entropy.std_error),
                num(row.partition.mean), num(row.partition.std_error), num(row.band)});
  r.summary.push_back("sign classes: " + std::to_string(c.plus_count) + " positive, " + std::to_string(c.minus_count) + " negative");
  return r;
}

inline RunResult run_moments(const RunConfig& cfg, Params& p, int jobs) {
  const int big_n = required_positive(p, "N");
  const int k_max = positive(p, "k_max", 2);
  const int samples = positive(p, "num_samples", 1000);
  p.finish();
  require_dense_size(big_n);
  const auto rows = models::trace_moment_check(big_n, k_max, samples, stream_seed(cfg.master_seed, Stream::disorder), jobs);
  RunResult r;
  r.data.header = {"k", "moment", "moment_std_error", "sq_trace", "sq_trace_std_error", "bound"};
  for (const auto& row : rows) {
    const nlohmann::json inst = {{"N", big_n}, {"k", row.k}, {"samples", samples}};
    const std::string k = std::to_string(row.k);
    r.reports.push_back(CertificateReport::make("moment_bound_k" + k, row.moment.mean, row.bound, 0.0, row.moment.std_error,
                                                CheckKind::statistical, inst, "E tr(H^2k)/2^N against (2k-1)!!"));
    r.reports.push_back(CertificateReport::make("moment_rms_k" + k, row.sq_trace.mean, row.moment.mean, 0.0,
                                                std::hypot(row.moment.std_error, row.sq_trace.std_error), CheckKind::statistical, inst,
                                                "E (tr(H^k)/2^N)^2 against E tr(H^2k)/2^N"));
    if (row.k == 1)
      r.reports.push_back(CertificateReport::make("moment_unit_k1", std::abs(row.moment.mean - 1.0), 0.0, 0.0, row.moment.std_error,
                                                  CheckKind::statistical, inst, "|E tr(H^2)/2^N - 1| within 3 standard errors"));
    r.data.add({k, num(row.moment.mean), num(row.moment.std_error), num(row.sq_trace.mean), num(row.sq_trace.std_error), num(row.bound)});
    r.summary.push_back("k = " + k + ": E tr(H^" + std::to_string(2 * row.k) + ")/2^N = " + num(row.moment.mean) + " +- " +
                        num(row.moment.std_error) + " (bound " + num(row.bound) + ")");
  }
  r.metrics = {{"N", big_n}, {"k_max", k_max}};
  r.stand_ins = {{"num_samples", samples}};
  return r;
}

/// Dispatches on cfg.experiment. Throws ConfigError on bad parameters and
/// ResourceError past the dense guard.
inline RunResult run_experiment(const RunConfig& cfg, int jobs) {
  Params p(cfg.parameters);
  const auto& e = cfg.experiment;
  if (e == "page") return run_page(cfg, p, jobs);
  if (e == "lattice") return run_lattice(cfg, p, jobs);
  if (e == "lattice_ti_equilibration") return run_ti(cfg, p, jobs);
  if (e == "charge") return run_charge(cfg, p, jobs);
  if (e == "spin_glass") return run_spin_glass(cfg, p, jobs);
  if (e == "syk") return run_syk(cfg, p, jobs);
  if (e == "thermo_curves") return run_thermo(cfg, p, jobs);
  if (e == "moment_check") return run_moments(cfg, p, jobs);
  throw ConfigError("experiment", "unknown experiment '" + e + "'");
}

}  // namespace entdyn::runner

#endif  // ENTDYN_RUNNER_EXPERIMENTS_HPP
