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

#ifndef ENTDYN_MODELS_DISORDER_HPP
#define ENTDYN_MODELS_DISORDER_HPP

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "entdyn/common.hpp"
#include "entdyn/qcore.hpp"
#include "entdyn/random.hpp"

namespace entdyn::models {

using qcore::HermitianOperator;
using qcore::Pauli;
using qcore::PauliString;
using qcore::PauliWord;
using qcore::SubsystemMask;

enum class DisorderKind { spin_glass, syk };

inline std::string to_string(DisorderKind k) { return k == DisorderKind::spin_glass ? "spin_glass" : "syk"; }

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

/// Number of couplings of the all-to-all two-body model, 9 N (N-1) / 2.
inline int spin_glass_dimension(int n) { return 9 * n * (n - 1) / 2; }

/// One disorder realisation: Gaussian couplings and the Hamiltonian they
/// define. `num_sites` counts qubits (spin glass) or Majorana modes (SYK).
struct DisorderSample {
  DisorderKind kind = DisorderKind::spin_glass;
  std::uint64_t seed = 0;
  int num_sites = 0;
  std::vector<double> coefficients;
  HermitianOperator hamiltonian = HermitianOperator::zero(1);

  int num_qubits() const { return kind == DisorderKind::spin_glass ? num_sites : num_sites / 2; }
};

namespace detail {
inline std::vector<double> gaussian_vector(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(count);
  for (auto& x : v) x = standard_normal(rng);
  return v;
}

constexpr std::array<Pauli, 3> kPaulis{Pauli::X, Pauli::Y, Pauli::Z};
}  // namespace detail

// ---------------------------------------------------------------------------
// Spin glass: H = d_N^{-1/2} sum_{j<k} sum_{l,m} J_{jklm} s^l_j s^m_k.
// Coefficient order: pairs (j,k) lexicographic, then l (outer), m (inner).
// ---------------------------------------------------------------------------

inline HermitianOperator spin_glass_operator(int num_qubits, const std::vector<double>& coefficients,
                                             const SubsystemMask& sites, int embed_in) {
  // Terms over pairs inside `sites`; local labels if embed_in == 0, else full labels.
  const int n = num_qubits;
  const int k = sites.size();
  const double norm = 1.0 / std::sqrt(static_cast<double>(spin_glass_dimension(k)));
  std::vector<PauliString> terms;
  int pair = 0;
  for (int j = 0; j < n; ++j) {
    for (int kk = j + 1; kk < n; ++kk, ++pair) {
      const int lj = sites.local_index(j), lk = sites.local_index(kk);
      if (lj < 0 || lk < 0) continue;
      for (int l = 0; l < 3; ++l) {
        for (int m = 0; m < 3; ++m) {
          const double c = coefficients[static_cast<std::size_t>(9 * pair + 3 * l + m)];
          if (c == 0.0) continue;
          const int a = embed_in ? j : lj, b = embed_in ? kk : lk;
          terms.emplace_back(c * norm, std::map<int, Pauli>{{a, detail::kPaulis[l]}, {b, detail::kPaulis[m]}});
        }
      }
    }
  }
  return HermitianOperator(embed_in ? embed_in : k, std::move(terms));
}

/// Spin-glass sample from explicit couplings (used for forced or negated draws).
inline DisorderSample spin_glass_from_coefficients(int num_qubits, std::vector<double> coefficients, std::uint64_t seed = 0) {
  require(num_qubits >= 2, "build_spin_glass: need at least 2 qubits");
  require(coefficients.size() == static_cast<std::size_t>(spin_glass_dimension(num_qubits)),
          "build_spin_glass: expected 9N(N-1)/2 couplings");
  DisorderSample s;
  s.kind = DisorderKind::spin_glass;
  s.seed = seed;
  s.num_sites = num_qubits;
  s.hamiltonian = spin_glass_operator(num_qubits, coefficients, SubsystemMask::range(0, num_qubits), num_qubits);
  s.coefficients = std::move(coefficients);
  return s;
}

inline DisorderSample build_spin_glass(int num_qubits, std::uint64_t seed) {
  require(num_qubits >= 2, "build_spin_glass: need at least 2 qubits");
  return spin_glass_from_coefficients(num_qubits, detail::gaussian_vector(static_cast<std::size_t>(spin_glass_dimension(num_qubits)), seed), seed);
}

inline DisorderSample negated(const DisorderSample& s) {
  std::vector<double> c = s.coefficients;
  for (auto& x : c) x = -x;
  DisorderSample out = s;
  out.coefficients = std::move(c);
  out.hamiltonian = s.hamiltonian.scaled(-1.0);
  return out;
}

// ---------------------------------------------------------------------------
// SYK via Jordan-Wigner on N/2 qubits (0-indexed Majorana mu, qubit q = mu/2):
//   chi_{2q}   = Z_0 ... Z_{q-1} X_q,
//   chi_{2q+1} = Z_0 ... Z_{q-1} Y_q.
// Even monomials of a pair-aligned block {2a, ..., 2a+n-1} act only on
// qubits a, ..., a + n/2 - 1.
// ---------------------------------------------------------------------------

inline PauliWord majorana_word(int mode, int num_qubits) {
  const int q = mode / 2;
  require(mode >= 0 && q < num_qubits, "majorana_word: mode out of range");
  PauliWord w;
  for (int p = 0; p < q; ++p) w.z |= basis_bit(p, num_qubits);
  const std::uint64_t bit = basis_bit(q, num_qubits);
  w.x |= bit;
  if (mode % 2 == 1) w.z |= bit;
  return w;
}

inline HermitianOperator majorana_operator(int mode, int num_majorana) {
  const int nq = num_majorana / 2;
  return HermitianOperator(nq, {PauliString(1.0, qcore::factors_of(majorana_word(mode, nq), nq))});
}

/// max over a <= b of || {chi_a, chi_b} - 2 delta_ab I ||_max on dense matrices.
inline double majorana_anticommutation_error(int num_majorana) {
  require(num_majorana >= 2 && num_majorana % 2 == 0, "majorana_anticommutation_error: need an even mode count");
  std::vector<CMatrix> chi;
  for (int m = 0; m < num_majorana; ++m) chi.push_back(majorana_operator(m, num_majorana).dense());
  const Eigen::Index d = chi.front().rows();
  double worst = 0.0;
  for (int a = 0; a < num_majorana; ++a) {
    for (int b = a; b < num_majorana; ++b) {
      CMatrix ac = chi[static_cast<std::size_t>(a)] * chi[static_cast<std::size_t>(b)] +
                   chi[static_cast<std::size_t>(b)] * chi[static_cast<std::size_t>(a)];
      if (a == b) ac -= 2.0 * CMatrix::Identity(d, d);
      worst = std::max(worst, ac.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

/// chi_j chi_k chi_l chi_m as a signed Pauli string (the product is Hermitian,
/// so the phase is +/-1).
inline PauliString majorana_quartic(const std::array<int, 4>& modes, int num_qubits, double coefficient) {
  PauliWord acc{};
  int phase = 0;
  for (int m : modes) {
    auto [ph, w] = qcore::multiply(acc, majorana_word(m, num_qubits));
    phase = (phase + ph) % 4;
    acc = w;
  }
  if (phase % 2 != 0) throw NumericalError("majorana_quartic: non-Hermitian monomial");
  const double sign = phase == 0 ? 1.0 : -1.0;
  return PauliString(coefficient * sign, qcore::factors_of(acc, num_qubits));
}

/// Enumerates j<k<l<m in lexicographic order.
template <class F>
void for_each_quadruple(int n, F&& f) {
  int index = 0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      for (int l = k + 1; l < n; ++l)
        for (int m = l + 1; m < n; ++m) f(index++, std::array<int, 4>{j, k, l, m});
}

/// SYK terms with all four modes in `modes` (sorted Majorana indices),
/// normalised by C(|modes|, 4)^{-1/2}, on the full register.
inline HermitianOperator syk_operator(int num_majorana, const std::vector<double>& coefficients, const SubsystemMask& modes) {
  const int nq = num_majorana / 2;
  const double norm = 1.0 / std::sqrt(binomial(modes.size(), 4));
  std::vector<PauliString> terms;
  for_each_quadruple(num_majorana, [&](int idx, const std::array<int, 4>& q) {
    const double c = coefficients[static_cast<std::size_t>(idx)];
    if (c == 0.0) return;
    for (int m : q)
      if (!modes.contains(m)) return;
    terms.push_back(majorana_quartic(q, nq, c * norm));
  });
  return HermitianOperator(nq, std::move(terms));
}

inline DisorderSample syk_from_coefficients(int num_majorana, std::vector<double> coefficients, std::uint64_t seed = 0) {
  require(num_majorana % 2 == 0, "build_syk: number of Majorana modes must be even");
  require(num_majorana >= 8, "build_syk: need at least 8 Majorana modes");
  require(coefficients.size() == static_cast<std::size_t>(binomial(num_majorana, 4)), "build_syk: expected C(N,4) couplings");
  DisorderSample s;
  s.kind = DisorderKind::syk;
  s.seed = seed;
  s.num_sites = num_majorana;
  s.hamiltonian = syk_operator(num_majorana, coefficients, SubsystemMask::range(0, num_majorana));
  s.coefficients = std::move(coefficients);
  return s;
}

inline DisorderSample build_syk(int num_majorana, std::uint64_t seed) {
  require(num_majorana % 2 == 0, "build_syk: number of Majorana modes must be even");
  require(num_majorana >= 8, "build_syk: need at least 8 Majorana modes");
  return syk_from_coefficients(num_majorana, detail::gaussian_vector(static_cast<std::size_t>(binomial(num_majorana, 4)), seed), seed);
}

/// A contiguous, pair-aligned block of Majorana modes and the qubit interval
/// it occupies under the Jordan-Wigner map.
struct MajoranaBlock {
  SubsystemMask modes;
  SubsystemMask qubits;
};

inline bool is_pair_aligned_block(const SubsystemMask& modes) {
  const auto& s = modes.sites();
  if (s.empty() || s.front() % 2 != 0 || s.size() % 2 != 0) return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] != s[i - 1] + 1) return false;
  return true;
}

/// All non-wrapping pair-aligned blocks of n modes.
inline std::vector<MajoranaBlock> pair_aligned_blocks(int num_majorana, int n) {
  require(n % 2 == 0 && n >= 2 && n <= num_majorana, "pair_aligned_blocks: n must be even and at most N");
  std::vector<MajoranaBlock> out;
  for (int a = 0; 2 * a + n <= num_majorana; ++a) {
    out.push_back({SubsystemMask::range(2 * a, n), SubsystemMask::range(a, n / 2)});
  }
  return out;
}

/// H_{J,A}: the model's terms inside A, renormalised as a model on |A| sites.
/// Spin glass: A is a qubit set, result acts on |A| qubits. SYK: A must be a
/// pair-aligned Majorana block; result acts on its |A|/2 qubits.
inline HermitianOperator restrict_to_subsystem(const DisorderSample& sample, const SubsystemMask& a) {
  if (sample.kind == DisorderKind::spin_glass) {
    require(a.size() >= 2, "restrict_to_subsystem: spin-glass subsystem needs at least 2 sites");
    a.check_within(sample.num_sites);
    return spin_glass_operator(sample.num_sites, sample.coefficients, a, 0);
  }
  require(a.size() >= 4, "restrict_to_subsystem: SYK subsystem needs at least 4 modes");
  a.check_within(sample.num_sites);
  require(is_pair_aligned_block(a), "restrict_to_subsystem: SYK subsystem must be a contiguous pair-aligned block");
  const HermitianOperator full = syk_operator(sample.num_sites, sample.coefficients, a);
  const SubsystemMask qubits = SubsystemMask::range(a.sites().front() / 2, a.size() / 2);
  HermitianOperator local = qcore::restrict_terms(full, qubits);
  if (local.terms().size() != full.terms().size()) throw NumericalError("restrict_to_subsystem: SYK block term leaked outside its qubits");
  return local;
}

/// SYK restriction to an arbitrary Majorana subset, left on the full register.
inline HermitianOperator syk_restriction_full(const DisorderSample& sample, const SubsystemMask& modes) {
  require(sample.kind == DisorderKind::syk, "syk_restriction_full: SYK sample required");
  require(modes.size() >= 4, "syk_restriction_full: need at least 4 modes");
  modes.check_within(sample.num_sites);
  return syk_operator(sample.num_sites, sample.coefficients, modes);
}

}  // namespace entdyn::models

#endif  // ENTDYN_MODELS_DISORDER_HPP
