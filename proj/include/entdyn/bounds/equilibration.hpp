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

#ifndef ENTDYN_BOUNDS_EQUILIBRATION_HPP
#define ENTDYN_BOUNDS_EQUILIBRATION_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "entdyn/bounds/lattice.hpp"
#include "entdyn/bounds/report.hpp"
#include "entdyn/dynamics.hpp"
#include "entdyn/models.hpp"
#include "entdyn/parallel.hpp"
#include "entdyn/qcore.hpp"
#include "entdyn/sampling.hpp"
#include "entdyn/stats.hpp"

namespace entdyn::bounds {

/// Relative gap-collision tolerance for translation-invariant chains; just
/// above eigensolver noise (1e-8 * ||H|| rejects nearly every random draw
/// at N >= 8).
inline constexpr double kTiGapTolerance = 1e-13;

/// Gap-certified translation-invariant periodic chain.
inline models::LatticeChain build_ti_chain(int num_qubits, std::uint64_t seed, int max_draws = 20) {
  return models::build_lattice_chain({.num_qubits = num_qubits,
                                      .boundary = models::Boundary::periodic,
                                      .translationally_invariant = true,
                                      .seed = seed,
                                      .gap_tolerance = kTiGapTolerance,
                                      .max_draws = max_draws});
}

/// Eigenstate averages over all 2^N eigenvectors of one subsystem.
struct EigenstateFloor {
  double mean_entropy = 0.0;
  double mean_renyi2 = 0.0;
  double mean_purity = 0.0;
  double purity_bound = 0.0;  // 2^{-n} + 2^n / N
  std::vector<double> entropies;
};

inline EigenstateFloor eigenstate_floor(const dynamics::EvolutionContext& ctx, const SubsystemMask& a, int jobs = 1) {
  const int big_n = ctx.num_qubits();
  struct Item {
    double s, r2, p;
  };
  const auto items = parallel_map(static_cast<std::size_t>(ctx.dim()), jobs, [&](std::size_t j) {
    const DensityMatrix rho = qcore::partial_trace(PureState::normalized(big_n, ctx.eigenvectors().col(static_cast<Eigen::Index>(j))), a);
    const double p = qcore::purity(rho);
    return Item{qcore::von_neumann_entropy(rho), -std::log(p), p};
  });
  EigenstateFloor f;
  for (const auto& it : items) {
    f.mean_entropy += it.s;
    f.mean_renyi2 += it.r2;
    f.mean_purity += it.p;
    f.entropies.push_back(it.s);
  }
  const auto d = static_cast<double>(items.size());
  f.mean_entropy /= d;
  f.mean_renyi2 /= d;
  f.mean_purity /= d;
  const int n = a.size();
  f.purity_bound = std::pow(2.0, -n) + std::pow(2.0, n) / big_n;
  return f;
}

/// One initial state: time-averaged entropy, equilibration distance and D_eff.
struct TiStateRun {
  double deff = 0.0;
  double mean_entropy = 0.0;     // mean over random times of S(rho_A(t))
  double infinite_entropy = 0.0; // S(rho_inf_A)
  double concavity_floor = 0.0;  // sum_j p_j S(rho_{j,A})
  dynamics::TraceDistanceAverage distance;
  InequalityTally fannes{"fannes_audenaert", tol::kExact};
};

struct TiCertificate {
  nlohmann::json instance;
  EigenstateFloor floor;
  std::vector<TiStateRun> runs;
  stats::MeanEstimate log_deff;
  stats::MeanEstimate entropy;  // E_Psi mean_t S(rho_A(t))
  double deficit = 0.0;         // n ln 2 - entropy.mean
  std::vector<CertificateReport> reports;
};

/// Equilibration certificate for one chain. tau <= 0 selects
/// default_equilibration_time (100 / smallest level spacing).
inline TiCertificate theorem_ti_equilibration_certificate(const models::LatticeChain& chain, int n, int num_states, double tau, int num_times,
                                                          std::uint64_t seed, int jobs = 1) {
  require(chain.spec.translationally_invariant, "theorem_ti_equilibration_certificate: chain must be translation invariant");
  require(n >= 1 && 2 * n <= chain.num_qubits(), "theorem_ti_equilibration_certificate: need 1 <= n <= N/2");
  require(num_states >= 2 && num_times >= 2, "theorem_ti_equilibration_certificate: need at least two states and two times");
  const int big_n = chain.num_qubits();
  const auto& eigs = chain.hamiltonian.spectrum().eigenvalues;
  const models::GapReport gaps = chain.gaps ? *chain.gaps
                                            : models::check_nondegenerate_gaps(eigs, kTiGapTolerance * chain.hamiltonian.operator_norm());
  if (!gaps.ok) {
    throw InvalidArgument("theorem_ti_equilibration_certificate: gap check failed (worst collision " + std::to_string(gaps.worst_collision) +
                          "); the non-degenerate gap hypothesis is unmet");
  }
  if (tau <= 0.0) tau = dynamics::default_equilibration_time(eigs);
  const SubsystemMask a = SubsystemMask::range(0, n);

  TiCertificate c;
  c.instance = {{"N", big_n}, {"n", n}, {"chain_seed", chain.spec.seed}, {"draws", chain.draws}, {"states", num_states},
                {"times", num_times}, {"tau", tau}, {"state_seed", seed}, {"gap_worst_collision", gaps.worst_collision},
                {"gap_tolerance", gaps.tolerance}, {"time_sampling", "uniform_random"}};
  {
    const dynamics::EvolutionContext probe(chain.hamiltonian, PureState::basis(big_n, 0));
    c.floor = eigenstate_floor(probe, a, jobs);
  }

  c.runs = parallel_map(static_cast<std::size_t>(num_states), jobs, [&](std::size_t i) {
    const PureState psi = sampling::sample_haar_product_state(big_n, derive_seed(seed, 0, i));
    const dynamics::EvolutionContext ctx(chain.hamiltonian, psi);
    const auto grid = dynamics::TimeGrid::uniform_random(tau, num_times, derive_seed(seed, 1, i));
    TiStateRun r;
    r.deff = dynamics::effective_dimension(ctx);
    const DensityMatrix inf = dynamics::reduced_diagonal_ensemble(ctx, a);
    r.infinite_entropy = qcore::von_neumann_entropy(inf);
    r.concavity_floor = ctx.populations().dot(Eigen::Map<const RVector>(c.floor.entropies.data(), ctx.dim()));
    const CMatrix states = ctx.evolve_many(grid.times);
    std::vector<double> dist;
    const Eigen::Index da = static_cast<Eigen::Index>(dimension_of(n));
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const DensityMatrix rho = qcore::partial_trace(PureState(big_n, states.col(static_cast<Eigen::Index>(k))), a);
      const double s = qcore::von_neumann_entropy(rho);
      const double d = qcore::trace_norm_distance(rho, inf);
      r.mean_entropy += s;
      dist.push_back(d);
      r.fannes.add(std::abs(s - r.infinite_entropy), qcore::fannes_audenaert_bound(0.5 * d, da));
    }
    r.mean_entropy /= static_cast<double>(grid.size());
    r.distance.estimate = stats::estimate_mean(dist);
    r.distance.bound = static_cast<double>(da) / std::sqrt(r.deff);
    r.distance.tau = tau;
    r.distance.min_gap = dynamics::min_nonzero_gap(eigs, dynamics::gap_floor(eigs));
    r.distance.pre_asymptotic = tau < 10.0 / r.distance.min_gap;
    return r;
  });

  std::vector<double> logd, ent;
  InequalityTally concavity("concavity", tol::kExact);
  InequalityTally fannes("fannes_audenaert", tol::kExact);
  InequalityTally ceiling("entropy_ceiling", kCeilingTolerance);
  CertificateReport eq_worst;
  std::size_t eq_fail = 0;
  bool pre_asymptotic = false;
  for (std::size_t i = 0; i < c.runs.size(); ++i) {
    const auto& r = c.runs[i];
    logd.push_back(std::log(r.deff));
    ent.push_back(r.mean_entropy);
    concavity.add(r.concavity_floor, r.infinite_entropy);
    fannes.merge(r.fannes);
    ceiling.add(r.mean_entropy, n * kLn2);
    auto rep = CertificateReport::make("equilibration_trace_distance", r.distance.estimate.mean, r.distance.bound, 0.0,
                                       r.distance.estimate.std_error, CheckKind::statistical, c.instance,
                                       "time average of ||rho_A(t) - rho_inf_A||_1 against 2^n / sqrt(D_eff); worst state");
    if (!rep.pass) ++eq_fail;
    if (i == 0 || rep.margin - 3.0 * rep.statistical_error < eq_worst.margin - 3.0 * eq_worst.statistical_error) eq_worst = rep;
    pre_asymptotic = pre_asymptotic || r.distance.pre_asymptotic;
  }
  c.log_deff = stats::estimate_mean(logd);
  c.entropy = stats::estimate_mean(ent);
  c.deficit = n * kLn2 - c.entropy.mean;
  c.instance["mean_log_deff"] = c.log_deff.mean;
  c.instance["deficit"] = c.deficit;
  c.instance["pre_asymptotic"] = pre_asymptotic;

  auto& out = c.reports;
  const auto& f = c.floor;
  out.push_back(CertificateReport::make("eigenstate_renyi_monotonicity", f.mean_renyi2, f.mean_entropy, tol::kExact, 0.0, CheckKind::exact,
                                        c.instance, "mean S >= mean Renyi-2 over eigenstates"));
  out.push_back(CertificateReport::make("eigenstate_purity_jensen", -std::log(f.mean_purity), f.mean_renyi2, tol::kExact, 0.0, CheckKind::exact,
                                        c.instance, "mean Renyi-2 >= -ln(mean purity)"));
  out.push_back(CertificateReport::make("eigenstate_purity_bound", f.mean_purity, f.purity_bound, tol::kExact, 0.0, CheckKind::exact, c.instance,
                                        "mean eigenstate purity <= 2^-n + 2^n / N"));
  out.push_back(CertificateReport::make("eigenstate_entropy_floor", -std::log(f.purity_bound), f.mean_entropy, tol::kExact, 0.0,
                                        CheckKind::exact, c.instance, "mean eigenstate entropy >= -ln(2^-n + 2^n / N)"));
  eq_worst.instance["failing_states"] = eq_fail;
  if (eq_fail > 0) eq_worst.pass = false;
  out.push_back(eq_worst);
  out.push_back(concavity.report(c.instance));
  out.push_back(fannes.report(c.instance));
  out.push_back(ceiling.report(c.instance));
  out.push_back(CertificateReport::info("mean_log_deff", c.log_deff.mean, 0.0, c.instance, "E_Psi ln D_eff over Haar product states"));
  out.push_back(CertificateReport::make("entropy_deficit", c.entropy.mean, n * kLn2, 0.0, 0.0, CheckKind::info, c.instance,
                                        "E_Psi S(rho_A(t)) at random times against n ln 2"));
  out.back().pass = true;
  return c;
}

/// Trend checks across an N sweep of certificates (at least 3 sizes):
/// ln D_eff linear in N with positive slope, deficit decreasing in N, and
/// the deficit fitted against 1/N.
inline std::vector<CertificateReport> ti_equilibration_trends(const std::vector<TiCertificate>& runs) {
  require(runs.size() >= 3, "fewer than 3 sweep points");
  std::vector<const TiCertificate*> sorted;
  for (const auto& r : runs) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const TiCertificate* x, const TiCertificate* y) { return x->instance["N"].get<int>() < y->instance["N"].get<int>(); });
  std::vector<double> ns, inv_n, logd, deficit;
  for (const auto* r : sorted) {
    const double big_n = r->instance["N"].get<double>();
    ns.push_back(big_n);
    inv_n.push_back(1.0 / big_n);
    logd.push_back(r->log_deff.mean);
    deficit.push_back(r->deficit);
  }
  std::vector<CertificateReport> out;
  const auto fd = stats::fit_line(ns, logd);
  nlohmann::json inst = {{"N", ns}, {"mean_log_deff", logd}, {"slope", fd.slope}, {"slope_ci", {fd.slope_ci_low, fd.slope_ci_high}},
                         {"confidence", fd.confidence}};
  auto r1 = CertificateReport::make("deff_exponential_growth", 0.0, fd.slope, 0.0, 0.0, CheckKind::trend, inst,
                                    "least-squares slope of ln D_eff against N");
  r1.pass = fd.slope > 0.0;
  out.push_back(r1);

  bool decreasing = true;
  for (std::size_t i = 1; i < deficit.size(); ++i) decreasing = decreasing && deficit[i] < deficit[i - 1];
  const auto fi = stats::fit_line(inv_n, deficit);
  nlohmann::json inst2 = {{"N", ns}, {"deficit", deficit}, {"slope_vs_inverse_N", fi.slope}, {"slope_ci", {fi.slope_ci_low, fi.slope_ci_high}},
                          {"intercept", fi.intercept}, {"confidence", fi.confidence}};
  auto r2 = CertificateReport::flag("deficit_decreasing", decreasing, CheckKind::trend, inst2, "n ln 2 - E_Psi S shrinks across the sweep");
  out.push_back(r2);
  auto r3 = CertificateReport::make("deficit_inverse_n_fit", 0.0, fi.slope, 0.0, 0.0, CheckKind::trend, inst2, "deficit fitted against 1/N");
  r3.pass = fi.slope > 0.0;
  out.push_back(r3);
  return out;
}

}  // namespace entdyn::bounds

#endif  // ENTDYN_BOUNDS_EQUILIBRATION_HPP
