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

// Randomised entropy inequalities on at most 4 qubits, shared by the unit
// tests and the acceptance binary. Instances mix ranks so that pure,
// low-rank and full-rank states all appear.

#ifndef ENTDYN_TESTS_PROPERTY_SUITE_HPP
#define ENTDYN_TESTS_PROPERTY_SUITE_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "entdyn/bounds/report.hpp"
#include "entdyn/qcore.hpp"
#include "test_util.hpp"

namespace entdyn::testing {

using bounds::InequalityTally;
using qcore::DensityMatrix;
using qcore::SubsystemMask;
using qcore::von_neumann_entropy;

inline int uniform_int(int lo, int hi, Rng& rng) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// A random state on `num_qubits` qubits with a random rank.
inline DensityMatrix random_state(int num_qubits, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(dimension_of(num_qubits));
  return random_density(d, uniform_int(1, static_cast<int>(d), rng), rng);
}

/// Random assignment of every qubit to one of `parts` nonempty groups.
inline std::vector<std::vector<int>> random_partition(int num_qubits, int parts, Rng& rng) {
  std::vector<int> order(static_cast<std::size_t>(num_qubits));
  for (int q = 0; q < num_qubits; ++q) order[static_cast<std::size_t>(q)] = q;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<int>> out(static_cast<std::size_t>(parts));
  for (int p = 0; p < parts; ++p) out[static_cast<std::size_t>(p)].push_back(order[static_cast<std::size_t>(p)]);
  for (int q = parts; q < num_qubits; ++q) out[static_cast<std::size_t>(uniform_int(0, parts - 1, rng))].push_back(order[static_cast<std::size_t>(q)]);
  return out;
}

inline SubsystemMask join(std::initializer_list<const std::vector<int>*> groups) {
  std::vector<int> s;
  for (const auto* g : groups) s.insert(s.end(), g->begin(), g->end());
  return SubsystemMask::from_unsorted(std::move(s));
}

inline double entropy_of(const DensityMatrix& rho, const SubsystemMask& m) { return von_neumann_entropy(qcore::partial_trace(rho, m)); }

/// S(AB) <= S(A) + S(B) and |S(A) - S(B)| <= S(AB).
inline std::vector<InequalityTally> subadditivity_suite(int instances, std::uint64_t seed, double tol) {
  Rng rng(seed);
  InequalityTally sub("subadditivity", tol), araki("araki_lieb", tol);
  for (int i = 0; i < instances; ++i) {
    const int n = uniform_int(2, 4, rng);
    const auto rho = random_state(n, rng);
    const auto p = random_partition(n, 2, rng);
    const double sab = von_neumann_entropy(rho), sa = entropy_of(rho, join({&p[0]})), sb = entropy_of(rho, join({&p[1]}));
    sub.add(sab, sa + sb);
    araki.add(std::abs(sa - sb), sab);
  }
  return {sub, araki};
}

/// S(ABC) + S(B) <= S(AB) + S(BC).
inline InequalityTally strong_subadditivity_suite(int instances, std::uint64_t seed, double tol) {
  Rng rng(seed);
  InequalityTally ssa("strong_subadditivity", tol);
  for (int i = 0; i < instances; ++i) {
    const int n = uniform_int(3, 4, rng);
    const auto rho = random_state(n, rng);
    const auto p = random_partition(n, 3, rng);
    ssa.add(von_neumann_entropy(rho) + entropy_of(rho, join({&p[1]})),
            entropy_of(rho, join({&p[0], &p[1]})) + entropy_of(rho, join({&p[1], &p[2]})));
  }
  return ssa;
}

/// |S(A) - S(complement)| <= 0 for pure states.
inline InequalityTally pure_symmetry_suite(int instances, std::uint64_t seed, double tol) {
  Rng rng(seed);
  InequalityTally sym("pure_state_symmetry", tol);
  for (int i = 0; i < instances; ++i) {
    const int n = uniform_int(2, 4, rng);
    const auto psi = random_pure(n, rng);
    const auto p = random_partition(n, 2, rng);
    sym.add(std::abs(von_neumann_entropy(qcore::partial_trace(psi, join({&p[0]}))) -
                     von_neumann_entropy(qcore::partial_trace(psi, join({&p[1]})))),
            0.0);
  }
  return sym;
}

/// |S(rho) - S(sigma)| <= T ln(D - 1) + h(T) with T half the trace norm.
inline InequalityTally fannes_audenaert_suite(int instances, std::uint64_t seed, double tol) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  InequalityTally fa("fannes_audenaert", tol);
  for (int i = 0; i < instances; ++i) {
    const int n = uniform_int(1, 4, rng);
    const auto rho = random_state(n, rng);
    const auto tau = random_state(n, rng);
    // half the pairs are close, where the bound is far from trivial
    const double p = i % 2 == 0 ? u(rng) : 0.05 * u(rng);
    const DensityMatrix sigma((1.0 - p) * rho.matrix() + p * tau.matrix());
    const double t = 0.5 * qcore::trace_norm_distance(rho, sigma);
    fa.add(std::abs(von_neumann_entropy(rho) - von_neumann_entropy(sigma)), qcore::fannes_audenaert_bound(t, rho.dim()));
  }
  return fa;
}

/// sum_i p_i S(rho_i) <= S(sum_i p_i rho_i).
inline InequalityTally concavity_suite(int instances, std::uint64_t seed, double tol) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  InequalityTally conc("concavity", tol);
  for (int i = 0; i < instances; ++i) {
    const int n = uniform_int(1, 4, rng);
    const int k = uniform_int(2, 4, rng);
    std::vector<double> w(static_cast<std::size_t>(k));
    double total = 0.0;
    for (auto& x : w) total += (x = u(rng) + 1e-3);
    const auto d = static_cast<Eigen::Index>(dimension_of(n));
    CMatrix mixed = CMatrix::Zero(d, d);
    double avg = 0.0;
    for (int j = 0; j < k; ++j) {
      const auto rho = random_state(n, rng);
      mixed += (w[static_cast<std::size_t>(j)] / total) * rho.matrix();
      avg += (w[static_cast<std::size_t>(j)] / total) * von_neumann_entropy(rho);
    }
    conc.add(avg, von_neumann_entropy(DensityMatrix(mixed)));
  }
  return conc;
}

/// S(rho) <= S(Gibbs state at the same energy), and beta E - S is smallest
/// for the Gibbs state at that beta.
inline std::vector<InequalityTally> thermal_extremality_suite(int instances, std::uint64_t seed, double tol) {
  Rng rng(seed);
  std::uniform_real_distribution<double> beta(-3.0, 3.0);
  InequalityTally ext("thermal_extremality", tol), gibbs("gibbs_variational", tol);
  for (int i = 0; i < instances; ++i) {
    const int n = uniform_int(1, 4, rng);
    const auto h = random_pauli_sum(n, uniform_int(1, 6, rng), rng, i % 2 == 0);
    const RVector& e = h.spectrum().eigenvalues;
    const auto rho = random_state(n, rng);
    const double energy = qcore::expectation_value(rho, h);
    if (energy > e.minCoeff() + 1e-9 && energy < e.maxCoeff() - 1e-9) {
      ext.add(von_neumann_entropy(rho), qcore::thermal_values(e, qcore::solve_beta_for_energy(e, energy)).entropy);
    } else {
      // flat spectrum: the maximally mixed state is the maximiser
      ext.add(von_neumann_entropy(rho), std::log(static_cast<double>(e.size())));
    }
    const double b = beta(rng);
    const auto th = qcore::thermal_values(e, b);
    gibbs.add(b * th.energy - th.entropy, b * energy - von_neumann_entropy(rho));
  }
  return {ext, gibbs};
}

/// Every suite at `instances` instances each.
inline std::vector<InequalityTally> all_property_suites(int instances, std::uint64_t seed, double tol) {
  std::vector<InequalityTally> out = subadditivity_suite(instances, derive_seed(seed, 0), tol);
  out.push_back(strong_subadditivity_suite(instances, derive_seed(seed, 1), tol));
  out.push_back(pure_symmetry_suite(instances, derive_seed(seed, 2), tol));
  out.push_back(fannes_audenaert_suite(instances, derive_seed(seed, 3), tol));
  out.push_back(concavity_suite(instances, derive_seed(seed, 4), tol));
  for (auto& t : thermal_extremality_suite(instances, derive_seed(seed, 5), tol)) out.push_back(t);
  return out;
}

}  // namespace entdyn::testing

#endif  // ENTDYN_TESTS_PROPERTY_SUITE_HPP
