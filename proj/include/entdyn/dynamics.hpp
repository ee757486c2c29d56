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

#ifndef ENTDYN_DYNAMICS_HPP
#define ENTDYN_DYNAMICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "entdyn/common.hpp"
#include "entdyn/parallel.hpp"
#include "entdyn/qcore.hpp"
#include "entdyn/random.hpp"
#include "entdyn/stats.hpp"

namespace entdyn::dynamics {

using qcore::DensityMatrix;
using qcore::HermitianOperator;
using qcore::PureState;
using qcore::SubsystemMask;

/// Initial state expanded in the eigenbasis of H: c_j = <j|Psi>, p_j = |c_j|^2.
/// Holds a copy of H, whose eigendecomposition is shared between copies.
class EvolutionContext {
 public:
  EvolutionContext(HermitianOperator h, const PureState& psi) : h_(std::move(h)), num_qubits_(psi.num_qubits()) {
    require(h_.dim() == psi.dim(), "EvolutionContext: state and Hamiltonian dimensions differ");
    const auto& s = h_.spectrum();
    coefficients_ = s.eigenvectors.adjoint() * psi.amplitudes();
    populations_ = coefficients_.cwiseAbs2();
    if (std::abs(populations_.sum() - 1.0) > tol::kNorm) throw NumericalError("EvolutionContext: populations do not sum to 1");
    energy_ = populations_.dot(s.eigenvalues);
  }

  const HermitianOperator& hamiltonian() const { return h_; }
  const RVector& eigenvalues() const { return h_.spectrum().eigenvalues; }
  const CMatrix& eigenvectors() const { return h_.spectrum().eigenvectors; }
  const CVector& coefficients() const { return coefficients_; }
  const RVector& populations() const { return populations_; }
  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return coefficients_.size(); }
  /// <Psi|H|Psi> = sum_j p_j E_j (conserved).
  double energy() const { return energy_; }

  /// |Psi(t)> = V diag(e^{-i E t}) c.
  PureState evolve(double t) const {
    if (t == 0.0) return PureState::normalized(num_qubits_, eigenvectors() * coefficients_);
    CVector phased(dim());
    for (Eigen::Index j = 0; j < dim(); ++j) phased(j) = std::polar(1.0, -eigenvalues()(j) * t) * coefficients_(j);
    return PureState::normalized(num_qubits_, eigenvectors() * phased);
  }

  /// Columns are |Psi(t_k)> (one matrix product for the whole batch).
  CMatrix evolve_many(const std::vector<double>& times) const {
    CMatrix phased(dim(), static_cast<Eigen::Index>(times.size()));
    for (std::size_t k = 0; k < times.size(); ++k)
      for (Eigen::Index j = 0; j < dim(); ++j)
        phased(j, static_cast<Eigen::Index>(k)) = std::polar(1.0, -eigenvalues()(j) * times[k]) * coefficients_(j);
    return eigenvectors() * phased;
  }

 private:
  HermitianOperator h_;
  int num_qubits_;
  CVector coefficients_;
  RVector populations_;
  double energy_ = 0.0;
};

enum class TimeSampling { linear, uniform_random };

inline std::string to_string(TimeSampling s) { return s == TimeSampling::linear ? "linear" : "uniform_random"; }

struct TimeGrid {
  std::vector<double> times;
  TimeSampling sampling = TimeSampling::linear;
  double tau = 0.0;  // upper end of the window

  /// count points from t0 to t1 inclusive.
  static TimeGrid linear(double t0, double t1, int count) {
    require(count >= 1, "TimeGrid: count must be at least 1");
    require(count == 1 || t1 > t0, "TimeGrid: need t1 > t0");
    TimeGrid g;
    g.sampling = TimeSampling::linear;
    g.tau = t1;
    for (int k = 0; k < count; ++k) g.times.push_back(count == 1 ? t0 : t0 + (t1 - t0) * k / (count - 1));
    g.validate();
    return g;
  }

  /// count i.i.d. uniform times in [0, tau], sorted.
  static TimeGrid uniform_random(double tau, int count, std::uint64_t seed) {
    require(tau > 0.0, "TimeGrid: tau must be positive for random sampling");
    require(count >= 1, "TimeGrid: count must be at least 1");
    Rng rng(seed);
    std::uniform_real_distribution<double> u(0.0, tau);
    TimeGrid g;
    g.sampling = TimeSampling::uniform_random;
    g.tau = tau;
    for (int k = 0; k < count; ++k) g.times.push_back(u(rng));
    std::sort(g.times.begin(), g.times.end());
    g.validate();
    return g;
  }

  void validate() const {
    require(!times.empty(), "TimeGrid: no times");
    for (std::size_t k = 1; k < times.size(); ++k) require(times[k] > times[k - 1], "TimeGrid: times must be strictly increasing");
  }

  std::size_t size() const { return times.size(); }
};

/// S(rho_A(t)) for every (time, mask), plus <H>(t).
struct EntropyTable {
  std::vector<double> times;
  std::vector<SubsystemMask> masks;
  RMatrix entropy;  // times x masks
  std::vector<double> energy;
};

inline EntropyTable entropy_timeseries(const EvolutionContext& ctx, const TimeGrid& grid, const std::vector<SubsystemMask>& masks,
                                       int jobs = 1) {
  grid.validate();
  require(!masks.empty(), "entropy_timeseries: no masks");
  for (const auto& m : masks) {
    require(!m.empty(), "entropy_timeseries: empty mask");
    m.check_within(ctx.num_qubits());
  }
  EntropyTable t{grid.times, masks, RMatrix(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(masks.size())), {}};
  const CMatrix states = ctx.evolve_many(grid.times);
  struct Row {
    std::vector<double> s;
    double e = 0.0;
  };
  const auto rows = parallel_map(grid.size(), jobs, [&](std::size_t k) {
    const PureState psi(ctx.num_qubits(), states.col(static_cast<Eigen::Index>(k)));
    Row r;
    for (const auto& m : masks) r.s.push_back(qcore::von_neumann_entropy(qcore::partial_trace(psi, m)));
    r.e = qcore::expectation_value(psi, ctx.hamiltonian());
    return r;
  });
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t m = 0; m < masks.size(); ++m) t.entropy(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)) = rows[k].s[m];
    t.energy.push_back(rows[k].e);
  }
  return t;
}

/// rho_inf = sum_j p_j |j><j|.
inline DensityMatrix diagonal_ensemble(const EvolutionContext& ctx) {
  const CMatrix& v = ctx.eigenvectors();
  return DensityMatrix(v * ctx.populations().cast<Complex>().asDiagonal() * v.adjoint());
}

/// tr_{A^c} rho_inf, accumulated eigenstate by eigenstate.
inline DensityMatrix reduced_diagonal_ensemble(const EvolutionContext& ctx, const SubsystemMask& keep) {
  keep.check_within(ctx.num_qubits());
  const Eigen::Index da = static_cast<Eigen::Index>(dimension_of(keep.size()));
  CMatrix acc = CMatrix::Zero(da, da);
  for (Eigen::Index j = 0; j < ctx.dim(); ++j) {
    const double p = ctx.populations()(j);
    if (p == 0.0) continue;
    acc += p * qcore::partial_trace(PureState(ctx.num_qubits(), ctx.eigenvectors().col(j)), keep).matrix();
  }
  return DensityMatrix(acc / acc.trace().real());
}

/// D_eff = 1 / sum_j p_j^2.
inline double effective_dimension(const EvolutionContext& ctx) { return 1.0 / ctx.populations().squaredNorm(); }

/// Smallest adjacent level spacing above `floor`.
inline double min_nonzero_gap(const RVector& eigenvalues, double floor = 0.0) {
  double g = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 1; i < eigenvalues.size(); ++i) {
    const double d = eigenvalues(i) - eigenvalues(i - 1);
    if (d > floor) g = std::min(g, d);
  }
  return g;
}

inline double gap_floor(const RVector& eigenvalues) {
  const double scale = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 1.0;
  return 1e-12 * std::max(1.0, scale);
}

/// tau = 100 / (smallest nonzero level spacing).
inline double default_equilibration_time(const RVector& eigenvalues) {
  const double g = min_nonzero_gap(eigenvalues, gap_floor(eigenvalues));
  require(std::isfinite(g), "default_equilibration_time: spectrum has no nonzero gap");
  return 100.0 / g;
}

struct TraceDistanceAverage {
  stats::MeanEstimate estimate;  // mean over the grid of ||rho_A(t) - rho_inf_A||_1
  double bound = 0.0;            // 2^n / sqrt(D_eff)
  double tau = 0.0;
  double min_gap = 0.0;
  bool pre_asymptotic = false;   // tau < 10 / min_gap
  std::string warning;
};

inline TraceDistanceAverage time_averaged_trace_distance(const EvolutionContext& ctx, const SubsystemMask& mask, const TimeGrid& grid,
                                                         int jobs = 1) {
  grid.validate();
  require(grid.sampling == TimeSampling::uniform_random, "time_averaged_trace_distance: grid must be uniform_random in [0, tau]");
  mask.check_within(ctx.num_qubits());
  const DensityMatrix inf = reduced_diagonal_ensemble(ctx, mask);
  const CMatrix states = ctx.evolve_many(grid.times);
  const auto d = parallel_map(grid.size(), jobs, [&](std::size_t k) {
    const PureState psi(ctx.num_qubits(), states.col(static_cast<Eigen::Index>(k)));
    return qcore::trace_norm_distance(qcore::partial_trace(psi, mask), inf);
  });
  TraceDistanceAverage r;
  r.estimate = stats::estimate_mean(d);
  r.bound = static_cast<double>(dimension_of(mask.size())) / std::sqrt(effective_dimension(ctx));
  r.tau = grid.tau;
  r.min_gap = min_nonzero_gap(ctx.eigenvalues(), gap_floor(ctx.eigenvalues()));
  if (grid.tau < 10.0 / r.min_gap) {
    r.pre_asymptotic = true;
    r.warning = "tau = " + std::to_string(grid.tau) + " is below 10 / min gap = " + std::to_string(10.0 / r.min_gap) + " (pre-asymptotic)";
  }
  return r;
}

/// CSV-safe mask label, e.g. "0-1-2".
inline std::string mask_id(const SubsystemMask& m) {
  std::string out;
  for (int s : m.sites()) out += (out.empty() ? "" : "-") + std::to_string(s);
  return out;
}

/// CSV with columns time,mask_id,entropy_nats,energy,bound_rhs (bound_rhs
/// empty when not given; one value per time otherwise).
inline void write_timeseries_csv(std::ostream& out, const EntropyTable& t, const std::vector<double>& bound_rhs = {}) {
  require(bound_rhs.empty() || bound_rhs.size() == t.times.size(), "write_timeseries_csv: bound_rhs length mismatch");
  out << "time,mask_id,entropy_nats,energy,bound_rhs\n";
  char buf[160];
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    for (std::size_t m = 0; m < t.masks.size(); ++m) {
      std::snprintf(buf, sizeof buf, "%.17g,%s,%.17g,%.17g,", t.times[k], mask_id(t.masks[m]).c_str(),
                    t.entropy(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m)), t.energy[k]);
      out << buf;
      if (!bound_rhs.empty()) {
        std::snprintf(buf, sizeof buf, "%.17g", bound_rhs[k]);
        out << buf;
      }
      out << '\n';
    }
  }
}

}  // namespace entdyn::dynamics

#endif  // ENTDYN_DYNAMICS_HPP
