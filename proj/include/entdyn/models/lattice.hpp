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

#ifndef ENTDYN_MODELS_LATTICE_HPP
#define ENTDYN_MODELS_LATTICE_HPP

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entdyn/common.hpp"
#include "entdyn/models/spectral.hpp"
#include "entdyn/qcore.hpp"
#include "entdyn/random.hpp"

namespace entdyn::models {

using qcore::HermitianOperator;
using qcore::Pauli;
using qcore::PauliString;
using qcore::SubsystemMask;

enum class Boundary { periodic, open };

struct LatticeChainSpec {
  int num_qubits = 0;
  Boundary boundary = Boundary::periodic;
  bool translationally_invariant = false;
  std::uint64_t seed = 0;
  double norm_floor = 0.5;
  double norm_ceiling = 2.0;
  /// Fixed two-site bond term on local sites 0 (left) and 1 (right). When
  /// absent, bond terms are drawn at random.
  std::optional<std::vector<PauliString>> bond_term;
  /// When set on a translation-invariant chain, the seed term is redrawn
  /// until the spectrum passes check_nondegenerate_gaps at tolerance
  /// gap_tolerance * ||H||.
  std::optional<double> gap_tolerance;
  int max_draws = 20;
};

struct Bond {
  int left = 0;
  int right = 0;
  SubsystemMask sites;        // {left, right} sorted
  HermitianOperator local;    // 2-qubit operator in the ordering of `sites`
  double norm = 0.0;
};

struct LatticeChain {
  LatticeChainSpec spec;
  HermitianOperator hamiltonian;
  std::vector<Bond> bonds;
  int draws = 1;                  // seed-term draws used (TI + gap check)
  std::optional<GapReport> gaps;  // present when the gap check ran

  int num_qubits() const { return spec.num_qubits; }
  double max_bond_norm() const {
    double m = 0.0;
    for (const auto& b : bonds) m = std::max(m, b.norm);
    return m;
  }
};

namespace detail {

/// Random traceless two-site term with unit operator norm. Single-site terms
/// on the left qubit are excluded, so averaging over the right qubit's state
/// leaves zero for every left state (the martingale convention for the
/// energy of random product states).
inline std::vector<PauliString> random_bond_term(std::uint64_t seed) {
  constexpr std::array<Pauli, 3> paulis{Pauli::X, Pauli::Y, Pauli::Z};
  Rng rng(seed);
  for (;;) {
    std::vector<PauliString> terms;
    for (Pauli b : paulis) {
      const double c = standard_normal(rng);
      if (c != 0.0) terms.emplace_back(c, std::map<int, Pauli>{{1, b}});
    }
    for (Pauli a : paulis) {
      for (Pauli b : paulis) {
        const double c = standard_normal(rng);
        if (c != 0.0) terms.emplace_back(c, std::map<int, Pauli>{{0, a}, {1, b}});
      }
    }
    HermitianOperator op(2, terms);
    const double norm = op.operator_norm();
    if (norm <= 1e-12) continue;  // degenerate draw: resample
    for (auto& t : terms) t = t.scaled(1.0 / norm);
    return terms;
  }
}

inline std::vector<PauliString> place_bond(const std::vector<PauliString>& local, int left, int right) {
  std::vector<PauliString> out;
  out.reserve(local.size());
  for (const auto& t : local) {
    std::map<int, Pauli> f;
    for (const auto& [site, p] : t.factors()) {
      require(site == 0 || site == 1, "bond term must act on local sites 0 and 1");
      f.emplace(site == 0 ? left : right, p);
    }
    out.emplace_back(t.coefficient(), std::move(f));
  }
  return out;
}

inline LatticeChain assemble_chain(const LatticeChainSpec& spec, const std::vector<std::vector<PauliString>>& bond_terms) {
  const int n = spec.num_qubits;
  const int num_bonds = spec.boundary == Boundary::periodic ? n : n - 1;
  std::vector<PauliString> all;
  std::vector<Bond> bonds;
  bonds.reserve(static_cast<std::size_t>(num_bonds));
  for (int j = 0; j < num_bonds; ++j) {
    const int right = (j + 1) % n;
    auto placed = place_bond(bond_terms[static_cast<std::size_t>(j)], j, right);
    for (const auto& t : placed) {
      require(!t.is_identity(), "bond term must be traceless (identity component found)");
    }
    HermitianOperator full(n, placed);
    SubsystemMask sites = SubsystemMask::from_unsorted({j, right});
    HermitianOperator local = qcore::restrict_terms(full, sites);
    const double norm = local.operator_norm();
    if (norm < spec.norm_floor || norm > spec.norm_ceiling) {
      throw InvalidArgument("bond " + std::to_string(j) + " has norm " + std::to_string(norm) + " outside [" +
                            std::to_string(spec.norm_floor) + ", " + std::to_string(spec.norm_ceiling) + "]");
    }
    bonds.push_back(Bond{j, right, std::move(sites), std::move(local), norm});
    all.insert(all.end(), placed.begin(), placed.end());
  }
  return LatticeChain{spec, HermitianOperator(n, std::move(all)), std::move(bonds), 1, std::nullopt};
}

}  // namespace detail

/// H = sum_j H_j over nearest-neighbour bonds (j, j+1), wrapping for
/// periodic chains. Random bonds are independent per site; a translation
/// invariant chain repeats one seed term on every bond.
inline LatticeChain build_lattice_chain(const LatticeChainSpec& spec) {
  require(spec.num_qubits >= 3, "build_lattice_chain: need at least 3 qubits");
  require(spec.norm_floor > 0.0 && spec.norm_floor <= spec.norm_ceiling, "build_lattice_chain: invalid norm window");
  require(spec.max_draws >= 1, "build_lattice_chain: max_draws must be positive");
  const int n = spec.num_qubits;
  const int num_bonds = spec.boundary == Boundary::periodic ? n : n - 1;

  if (!spec.translationally_invariant) {
    require(!spec.gap_tolerance, "build_lattice_chain: gap check applies to translation-invariant chains only");
    std::vector<std::vector<PauliString>> terms;
    for (int j = 0; j < num_bonds; ++j) {
      terms.push_back(spec.bond_term ? *spec.bond_term : detail::random_bond_term(derive_seed(spec.seed, static_cast<std::uint64_t>(j))));
    }
    return detail::assemble_chain(spec, terms);
  }

  for (int draw = 0; draw < spec.max_draws; ++draw) {
    const auto seed_term = spec.bond_term ? *spec.bond_term : detail::random_bond_term(derive_seed(spec.seed, static_cast<std::uint64_t>(draw)));
    LatticeChain chain = detail::assemble_chain(spec, std::vector<std::vector<PauliString>>(static_cast<std::size_t>(num_bonds), seed_term));
    chain.draws = draw + 1;
    if (!spec.gap_tolerance) return chain;
    chain.gaps = check_nondegenerate_gaps(chain.hamiltonian.spectrum().eigenvalues, *spec.gap_tolerance * chain.hamiltonian.operator_norm());
    if (chain.gaps->ok) return chain;
    if (spec.bond_term) break;  // a fixed term cannot be redrawn
  }
  throw NumericalError("build_lattice_chain: no draw passed the non-degenerate gap check");
}

}  // namespace entdyn::models

#endif  // ENTDYN_MODELS_LATTICE_HPP
