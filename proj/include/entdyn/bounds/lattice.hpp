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

#ifndef ENTDYN_BOUNDS_LATTICE_HPP
#define ENTDYN_BOUNDS_LATTICE_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "entdyn/bounds/entropy.hpp"
#include "entdyn/bounds/report.hpp"
#include "entdyn/dynamics.hpp"
#include "entdyn/models.hpp"
#include "entdyn/parallel.hpp"
#include "entdyn/qcore.hpp"
#include "entdyn/sampling.hpp"
#include "entdyn/stats.hpp"

namespace entdyn::bounds {

/// Slack on the entropy ceiling n ln 2.
inline constexpr double kCeilingTolerance = 1e-8;

/// Energy above which the strict-margin check applies: |<H>| > c sqrt(N).
inline constexpr double kEnergyThresholdC = 0.3;

// ---------------------------------------------------------------------------
// Local chains: E_n S <= (n/2) E_2 S <= ... <= n ln 2 - n (sum eps)^2 / (4 N^2)
// ---------------------------------------------------------------------------

/// One time point of the chain. Every field is a subsystem or bond average.
struct LatPoint {
  double t = 0.0;
  double lhs = 0.0;             // E_{|A|=n} S(rho_A)
  double window0 = 0.0;         // S of the window {0, ..., n-1}
  double e2 = 0.0;              // E_{|A|=2} S(rho_A)
  double two_site_avg_rhs = 0.0;  // (n / 2N) sum_j (2 ln 2 - eps_j^2 / 2)
  double rhs = 0.0;             // n ln 2 - n (sum eps)^2 / (4 N^2)
  double energy_rhs = 0.0;      // same with sum eps replaced by |E| / max ||H_j||
  double sum_eps = 0.0;
  double energy = 0.0;          // <H>(t)
};

struct LatCertificate {
  nlohmann::json instance;
  std::vector<LatPoint> points;
  double energy = 0.0;  // <Psi|H|Psi>
  double max_lhs = 0.0;
  InequalityTally subadd{"chain_subadditivity", tol::kExact};
  InequalityTally two_site{"two_site_per_bond", tol::kExact};
  InequalityTally two_site_avg{"two_site_average", tol::kExact};
  InequalityTally rms_am{"rms_am", tol::kExact};
  InequalityTally energy_link{"energy_linkage", tol::kExact};
  InequalityTally chain{"chain_final", tol::kExact};
  InequalityTally energy_form{"chain_energy_form", tol::kExact};
  InequalityTally ceiling{"entropy_ceiling", kCeilingTolerance};

  std::vector<InequalityTally*> tallies() { return {&subadd, &two_site, &two_site_avg, &rms_am, &energy_link, &chain, &energy_form, &ceiling}; }
  std::vector<const InequalityTally*> tallies() const {
    return {&subadd, &two_site, &two_site_avg, &rms_am, &energy_link, &chain, &energy_form, &ceiling};
  }

  /// Strict gap below n ln 2 (only meaningful when |E| > 0.3 sqrt N).
  bool energetic() const { return std::abs(energy) > kEnergyThresholdC * std::sqrt(instance.value("N", 0.0)); }

  std::vector<CertificateReport> reports() const {
    std::vector<CertificateReport> out;
    for (const auto* t : tallies()) out.push_back(t->report(instance));
    const double nln2 = instance.value("n", 0) * kLn2;
    if (energetic()) {
      CertificateReport r = CertificateReport::make("strict_margin", max_lhs, nln2, 0.0, 0.0, CheckKind::exact, instance,
                                                    "max over the time grid of the subsystem-average entropy; must lie strictly below n ln 2");
      r.pass = nln2 - max_lhs > 0.0;
      out.push_back(r);
    } else {
      out.push_back(CertificateReport::info("strict_margin", max_lhs, nln2, instance, "|<H>| <= 0.3 sqrt(N): margin reported only"));
    }
    return out;
  }
};

inline void require_lat_preconditions(const models::LatticeChain& chain, int n) {
  require(chain.spec.boundary == models::Boundary::periodic, "theorem_lat_certificate: chain must be periodic");
  if (n <= 1) throw InvalidArgument("theorem_lat_certificate: n must exceed 1");
  require(2 * n <= chain.num_qubits(), "theorem_lat_certificate: n must not exceed N/2");
}

/// Evaluates every link of the chain at each grid time for one initial state.
inline LatCertificate theorem_lat_certificate(const models::LatticeChain& chain, const PureState& psi, const dynamics::TimeGrid& grid, int n,
                                              int jobs = 1) {
  require_lat_preconditions(chain, n);
  grid.validate();
  const int big_n = chain.num_qubits();
  const dynamics::EvolutionContext ctx(chain.hamiltonian, psi);
  const auto windows = contiguous_subsystems(big_n, n);
  const double max_norm = chain.max_bond_norm();
  const double nd = n, nn = big_n;
  const CMatrix states = ctx.evolve_many(grid.times);

  struct Eval {
    LatPoint p;
    std::vector<double> bond_s, bond_eps;
  };
  const auto evals = parallel_map(grid.size(), jobs, [&](std::size_t k) {
    const PureState st(big_n, states.col(static_cast<Eigen::Index>(k)));
    Eval e;
    e.p.t = grid.times[k];
    for (std::size_t w = 0; w < windows.size(); ++w) {
      const double s = qcore::von_neumann_entropy(qcore::partial_trace(st, windows[w]));
      e.p.lhs += s;
      if (w == 0) e.p.window0 = s;
    }
    e.p.lhs /= nn;
    double bound_sum = 0.0;
    for (const auto& b : chain.bonds) {
      const DensityMatrix rho = qcore::partial_trace(st, b.sites);
      const double s = qcore::von_neumann_entropy(rho);
      const double eps = std::abs(qcore::expectation_value(rho, b.local)) / b.norm;
      e.bond_s.push_back(s);
      e.bond_eps.push_back(eps);
      e.p.e2 += s;
      e.p.sum_eps += eps;
      bound_sum += two_site_entropy_bound(eps);
    }
    e.p.e2 /= nn;
    e.p.two_site_avg_rhs = nd / (2.0 * nn) * bound_sum;
    e.p.rhs = nd * kLn2 - nd / (4.0 * nn * nn) * e.p.sum_eps * e.p.sum_eps;
    e.p.energy = qcore::expectation_value(st, chain.hamiltonian);
    return e;
  });

  LatCertificate c;
  c.energy = ctx.energy();
  c.instance = {{"N", big_n}, {"n", n}, {"seed", chain.spec.seed}, {"translationally_invariant", chain.spec.translationally_invariant},
                {"times", grid.size()}, {"t_min", grid.times.front()}, {"t_max", grid.times.back()},
                {"time_sampling", dynamics::to_string(grid.sampling)}, {"energy", c.energy}, {"max_bond_norm", max_norm}};
  const double linked = std::abs(c.energy) / max_norm;
  for (const auto& e : evals) {
    LatPoint p = e.p;
    p.energy_rhs = nd * kLn2 - nd / (4.0 * nn * nn) * linked * linked;
    c.subadd.add(p.lhs, nd / 2.0 * p.e2);
    for (std::size_t j = 0; j < e.bond_s.size(); ++j) c.two_site.add(e.bond_s[j], two_site_entropy_bound(e.bond_eps[j]));
    c.two_site_avg.add(nd / 2.0 * p.e2, p.two_site_avg_rhs);
    c.rms_am.add(p.two_site_avg_rhs, p.rhs);
    // sum eps >= |E| / max ||H_j||, written as lhs <= rhs
    c.energy_link.add(linked, p.sum_eps);
    c.chain.add(p.lhs, p.rhs);
    c.energy_form.add(p.lhs, p.energy_rhs);
    c.ceiling.add(p.lhs, nd * kLn2);
    c.max_lhs = std::max(c.max_lhs, p.lhs);
    c.points.push_back(p);
  }
  return c;
}

/// Aggregate of many initial states: tallies merged, strict margins counted.
struct LatSuite {
  nlohmann::json instance;
  std::vector<LatCertificate> runs;

  std::vector<CertificateReport> reports() const {
    std::vector<CertificateReport> out;
    if (runs.empty()) return out;
    auto merged = runs.front();
    std::size_t energetic = 0, strict_ok = 0;
    double worst_strict = std::numeric_limits<double>::infinity();
    double worst_lhs = 0.0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (i > 0) {
        auto dst = merged.tallies();
        const auto src = runs[i].tallies();
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k]->merge(*src[k]);
      }
      if (runs[i].energetic()) {
        ++energetic;
        const double m = instance.value("n", 0) * kLn2 - runs[i].max_lhs;
        if (m > 0.0) ++strict_ok;
        if (m < worst_strict) {
          worst_strict = m;
          worst_lhs = runs[i].max_lhs;
        }
      }
    }
    for (const auto* t : std::as_const(merged).tallies()) out.push_back(t->report(instance));
    nlohmann::json inst = instance;
    inst["states"] = runs.size();
    inst["energetic_states"] = energetic;
    const double nln2 = instance.value("n", 0) * kLn2;
    if (energetic > 0) {
      CertificateReport r = CertificateReport::make("strict_margin", worst_lhs, nln2, 0.0, 0.0, CheckKind::exact, inst,
                                                    std::to_string(strict_ok) + " of " + std::to_string(energetic) +
                                                        " states with |<H>| > 0.3 sqrt(N) stay strictly below n ln 2");
      r.pass = strict_ok == energetic;
      out.push_back(r);
    } else {
      out.push_back(CertificateReport::info("strict_margin", 0.0, nln2, inst, "no state exceeded the energy threshold"));
    }
    return out;
  }
};

/// Runs the chain certificate over num_states Haar product states
/// (state i from derive_seed(seed, i)).
inline LatSuite lat_certificate_suite(const models::LatticeChain& chain, int n, int num_states, std::uint64_t seed,
                                      const dynamics::TimeGrid& grid, int jobs = 1) {
  require(num_states >= 1, "lat_certificate_suite: need at least one state");
  LatSuite s;
  s.instance = {{"N", chain.num_qubits()}, {"n", n}, {"chain_seed", chain.spec.seed}, {"state_seed", seed}, {"times", grid.size()}};
  s.runs = parallel_map(static_cast<std::size_t>(num_states), jobs, [&](std::size_t i) {
    return theorem_lat_certificate(chain, sampling::sample_haar_product_state(chain.num_qubits(), derive_seed(seed, i)), grid, n, 1);
  });
  return s;
}

/// Translation-invariant chains: a fixed window averaged over Haar product
/// states in place of the subsystem average.
inline std::vector<CertificateReport> lat_corollary_certificate(const models::LatticeChain& chain, int n, int num_states,
                                                                std::uint64_t seed, const dynamics::TimeGrid& grid, int jobs = 1) {
  require(chain.spec.translationally_invariant, "lat_corollary_certificate: chain must be translation invariant");
  require(num_states >= 2, "lat_corollary_certificate: need at least two states");
  const LatSuite suite = lat_certificate_suite(chain, n, num_states, seed, grid, jobs);
  nlohmann::json inst = suite.instance;
  inst["states"] = num_states;
  std::vector<CertificateReport> out;

  // bound: E_Psi S(rho_A(t)) <= E_Psi rhs(Psi, t), worst time
  CertificateReport worst;
  bool first = true;
  double sup_mean = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    std::vector<double> s, r, d;
    for (const auto& run : suite.runs) {
      s.push_back(run.points[k].window0);
      r.push_back(run.points[k].rhs);
      d.push_back(run.points[k].window0 - run.points[k].rhs);
    }
    const auto es = stats::estimate_mean(s), er = stats::estimate_mean(r), ed = stats::estimate_mean(d);
    sup_mean = std::max(sup_mean, es.mean);
    auto rep = CertificateReport::make("corollary_bound", es.mean, er.mean, tol::kExact, ed.std_error, CheckKind::statistical, inst,
                                       "fixed window {0..n-1}; worst grid time, paired standard error");
    rep.instance["t"] = grid.times[k];
    if (first || rep.margin < worst.margin) worst = rep;
    first = false;
  }
  out.push_back(worst);

  // ensemble translation symmetry: fixed window vs subsystem average
  std::vector<double> diff;
  for (const auto& run : suite.runs) {
    double acc = 0.0;
    for (const auto& p : run.points) acc += p.window0 - p.lhs;
    diff.push_back(acc / static_cast<double>(run.points.size()));
  }
  const auto ed = stats::estimate_mean(diff);
  out.push_back(CertificateReport::make("corollary_window_symmetry", std::abs(ed.mean), 0.0, 0.0, ed.std_error, CheckKind::statistical, inst,
                                        "time-averaged paired difference between the fixed window and the subsystem average"));
  out.push_back(CertificateReport::info("corollary_sup_mean", sup_mean, n * kLn2, inst, "max over the grid of E_Psi S(rho_A(t))"));
  return out;
}

// ---------------------------------------------------------------------------
// Charge-conserving circuits
// ---------------------------------------------------------------------------

struct ChargePoint {
  int layer = 0;                 // layers applied so far
  double lhs = 0.0;              // (1/m) sum_j S(rho_{A_j})
  double step1_rhs = 0.0;        // (n/N) sum_k S(rho_k)
  double step2_rhs = 0.0;        // (n/N) sum_k (ln 2 - z_k^2 / 2)
  double sharp_rhs = 0.0;        // n ln 2 - n (sum |z|)^2 / (2 N^2)
  double rhs = 0.0;              // n ln 2 - n (sum |z|)^2 / (4 N^2)
  double sum_abs_z = 0.0;
  double charge = 0.0;           // <sigma^z>
};

struct ChargeCertificate {
  nlohmann::json instance;
  std::vector<ChargePoint> points;
  double initial_charge = 0.0;
  double max_lhs = 0.0;
  InequalityTally step1{"charge_subadditivity", tol::kExact};
  InequalityTally qubit{"charge_qubit_lemma", tol::kExact};
  InequalityTally step2{"charge_qubit_average", tol::kExact};
  InequalityTally rms_am{"charge_rms_am", tol::kExact};
  InequalityTally chain{"charge_chain_final", tol::kExact};
  InequalityTally sharp{"charge_chain_sharp", tol::kExact};
  InequalityTally link{"charge_linkage", tol::kExact};
  InequalityTally conserved{"charge_conservation", 1e-9};
  InequalityTally ceiling{"entropy_ceiling", kCeilingTolerance};

  std::vector<const InequalityTally*> tallies() const {
    return {&step1, &qubit, &step2, &rms_am, &chain, &sharp, &link, &conserved, &ceiling};
  }
  std::vector<InequalityTally*> tallies() { return {&step1, &qubit, &step2, &rms_am, &chain, &sharp, &link, &conserved, &ceiling}; }

  bool energetic() const { return std::abs(initial_charge) > kEnergyThresholdC * std::sqrt(instance.value("N", 0.0)); }
};

/// Single-qubit bound S(rho) <= ln 2 - tr^2(rho sigma^z) / 2.
inline double qubit_entropy_bound(double z) { return kLn2 - 0.5 * z * z; }

/// Evaluates the charge chain after every layer (layer 0 = initial state).
inline ChargeCertificate theorem_charge_certificate(const models::ChargeCircuit& circuit, const PureState& psi, int n,
                                                    const std::vector<SubsystemMask>& windows) {
  const int big_n = circuit.num_qubits;
  require(psi.num_qubits() == big_n, "theorem_charge_certificate: register size mismatch");
  require(n >= 1 && 2 * n <= big_n, "theorem_charge_certificate: need 1 <= n <= N/2");
  check_covering(big_n, windows);
  require(windows.front().size() == n, "theorem_charge_certificate: windows must have n qubits");
  const double nd = n, nn = big_n;

  ChargeCertificate c;
  c.instance = {{"N", big_n}, {"n", n}, {"m", windows.size()}, {"depth", circuit.layers.size()}};
  PureState st = psi;
  for (std::size_t d = 0; d <= circuit.layers.size(); ++d) {
    if (d > 0) st = models::apply_layer(circuit, d - 1, st);
    ChargePoint p;
    p.layer = static_cast<int>(d);
    double sum_s1 = 0.0, sum_bound = 0.0;
    for (int k = 0; k < big_n; ++k) {
      const DensityMatrix rho = qcore::partial_trace(st, SubsystemMask{k});
      const double z = (rho.matrix()(0, 0) - rho.matrix()(1, 1)).real();
      const double s = qcore::von_neumann_entropy(rho);
      c.qubit.add(s, qubit_entropy_bound(z));
      sum_s1 += s;
      sum_bound += qubit_entropy_bound(z);
      p.sum_abs_z += std::abs(z);
      p.charge += z;
    }
    for (const auto& a : windows) p.lhs += qcore::von_neumann_entropy(qcore::partial_trace(st, a));
    p.lhs /= static_cast<double>(windows.size());
    p.step1_rhs = nd / nn * sum_s1;
    p.step2_rhs = nd / nn * sum_bound;
    p.sharp_rhs = nd * kLn2 - nd / (2.0 * nn * nn) * p.sum_abs_z * p.sum_abs_z;
    p.rhs = nd * kLn2 - nd / (4.0 * nn * nn) * p.sum_abs_z * p.sum_abs_z;
    if (d == 0) c.initial_charge = p.charge;
    c.step1.add(p.lhs, p.step1_rhs);
    c.step2.add(p.step1_rhs, p.step2_rhs);
    c.rms_am.add(p.step2_rhs, p.sharp_rhs);
    c.chain.add(p.lhs, p.rhs);
    c.sharp.add(p.lhs, p.sharp_rhs);
    c.link.add(std::abs(c.initial_charge), p.sum_abs_z);
    c.conserved.add(std::abs(p.charge - c.initial_charge), 0.0);
    c.ceiling.add(p.lhs, nd * kLn2);
    c.max_lhs = std::max(c.max_lhs, p.lhs);
    c.points.push_back(p);
  }
  c.instance["initial_charge"] = c.initial_charge;
  return c;
}

struct ChargeSuite {
  nlohmann::json instance;
  std::vector<ChargeCertificate> runs;

  std::vector<CertificateReport> reports() const {
    std::vector<CertificateReport> out;
    if (runs.empty()) return out;
    ChargeCertificate merged = runs.front();
    std::size_t energetic = 0, strict_ok = 0;
    double worst = std::numeric_limits<double>::infinity(), worst_lhs = 0.0;
    const double nln2 = instance.value("n", 0) * kLn2;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (i > 0) {
        auto dst = merged.tallies();
        const auto src = runs[i].tallies();
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k]->merge(*src[k]);
      }
      if (runs[i].energetic()) {
        ++energetic;
        const double m = nln2 - runs[i].max_lhs;
        if (m > 0.0) ++strict_ok;
        if (m < worst) {
          worst = m;
          worst_lhs = runs[i].max_lhs;
        }
      }
    }
    for (const auto* t : std::as_const(merged).tallies()) out.push_back(t->report(instance));
    nlohmann::json inst = instance;
    inst["states"] = runs.size();
    inst["energetic_states"] = energetic;
    if (energetic > 0) {
      CertificateReport r = CertificateReport::make("strict_margin", worst_lhs, nln2, 0.0, 0.0, CheckKind::exact, inst,
                                                    std::to_string(strict_ok) + " of " + std::to_string(energetic) +
                                                        " states with |<sigma^z>| > 0.3 sqrt(N) stay strictly below n ln 2");
      r.pass = strict_ok == energetic;
      out.push_back(r);
    } else {
      out.push_back(CertificateReport::info("strict_margin", 0.0, nln2, inst, "no state exceeded the charge threshold"));
    }
    return out;
  }
};

inline ChargeSuite charge_certificate_suite(const models::ChargeCircuit& circuit, int n, const std::vector<SubsystemMask>& windows,
                                            int num_states, std::uint64_t seed, int jobs = 1) {
  require(num_states >= 1, "charge_certificate_suite: need at least one state");
  ChargeSuite s;
  s.instance = {{"N", circuit.num_qubits}, {"n", n}, {"m", windows.size()}, {"depth", circuit.layers.size()}, {"state_seed", seed}};
  s.runs = parallel_map(static_cast<std::size_t>(num_states), jobs, [&](std::size_t i) {
    return theorem_charge_certificate(circuit, sampling::sample_haar_product_state(circuit.num_qubits, derive_seed(seed, i)), n, windows);
  });
  return s;
}

}  // namespace entdyn::bounds

#endif  // ENTDYN_BOUNDS_LATTICE_HPP
