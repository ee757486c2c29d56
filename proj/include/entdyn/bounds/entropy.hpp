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

#ifndef ENTDYN_BOUNDS_ENTROPY_HPP
#define ENTDYN_BOUNDS_ENTROPY_HPP

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "entdyn/bounds/report.hpp"
#include "entdyn/common.hpp"
#include "entdyn/qcore.hpp"

namespace entdyn::bounds {

using qcore::DensityMatrix;
using qcore::HermitianOperator;
using qcore::PureState;
using qcore::SubsystemMask;

/// Haar mean of S(rho_A) for a d_A x d_B pure state, as the exact harmonic
/// sum: sum_{k=d_B+1}^{d_A d_B} 1/k - (d_A - 1) / (2 d_B).
inline double page_mean_entropy(int d_a, int d_b) {
  require(d_a >= 1 && d_b >= 1, "page_mean_entropy: dimensions must be positive");
  if (d_a > d_b) throw InvalidArgument("page_mean_entropy: d_A > d_B");
  double s = 0.0;
  // summed from the small end so the result is independent of d_B's size
  for (long k = static_cast<long>(d_a) * d_b; k > d_b; --k) s += 1.0 / static_cast<double>(k);
  return s - (d_a - 1.0) / (2.0 * d_b);
}

// ---------------------------------------------------------------------------
// Subsystem families
// ---------------------------------------------------------------------------

enum class SchemeKind { contiguous, all_subsets, windows };

inline std::string to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::contiguous: return "contiguous";
    case SchemeKind::all_subsets: return "all_subsets";
    case SchemeKind::windows: return "windows";
  }
  return "?";
}

inline SchemeKind scheme_kind_from_string(const std::string& s) {
  if (s == "contiguous") return SchemeKind::contiguous;
  if (s == "all_subsets") return SchemeKind::all_subsets;
  if (s == "windows") return SchemeKind::windows;
  throw InvalidArgument("unknown subsystem scheme '" + s + "'");
}

struct SubsystemScheme {
  SchemeKind kind = SchemeKind::contiguous;
  int m = 0;  // windows only

  static SubsystemScheme contiguous() { return {SchemeKind::contiguous, 0}; }
  static SubsystemScheme all_subsets() { return {SchemeKind::all_subsets, 0}; }
  static SubsystemScheme windows(int m) { return {SchemeKind::windows, m}; }
};

/// The N periodic windows {j, j+1, ..., j+n-1} mod N.
inline std::vector<SubsystemMask> contiguous_subsystems(int num_qubits, int n) {
  require(n >= 1 && n <= num_qubits, "contiguous_subsystems: need 1 <= n <= N");
  std::vector<SubsystemMask> out;
  for (int j = 0; j < num_qubits; ++j) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i) s.push_back((j + i) % num_qubits);
    out.push_back(SubsystemMask::from_unsorted(std::move(s)));
  }
  return out;
}

/// All C(N, n) subsets in lexicographic order.
inline std::vector<SubsystemMask> all_subsets(int num_qubits, int n) {
  require(n >= 1 && n <= num_qubits, "all_subsets: need 1 <= n <= N");
  std::vector<SubsystemMask> out;
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    out.emplace_back(idx);
    int i = n - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == num_qubits - n + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < n; ++k) idx[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k - 1)] + 1;
  }
  return out;
}

/// Throws unless every qubit lies in exactly m n / N of the subsystems.
inline void check_covering(int num_qubits, const std::vector<SubsystemMask>& family) {
  require(!family.empty(), "covering property: empty subsystem family");
  const int n = family.front().size();
  const auto m = static_cast<int>(family.size());
  for (const auto& a : family) {
    a.check_within(num_qubits);
    require(a.size() == n, "covering property violated: subsystems differ in size");
  }
  if ((m * n) % num_qubits != 0) {
    throw InvalidArgument("covering property violated: m n = " + std::to_string(m * n) + " is not a multiple of N = " +
                          std::to_string(num_qubits));
  }
  const int each = m * n / num_qubits;
  std::vector<int> count(static_cast<std::size_t>(num_qubits), 0);
  for (const auto& a : family)
    for (int s : a.sites()) ++count[static_cast<std::size_t>(s)];
  for (int q = 0; q < num_qubits; ++q) {
    if (count[static_cast<std::size_t>(q)] != each) {
      throw InvalidArgument("covering property violated: qubit " + std::to_string(q) + " lies in " +
                            std::to_string(count[static_cast<std::size_t>(q)]) + " subsystems, expected " + std::to_string(each));
    }
  }
}

/// m windows A_j = {(j n + i) mod N : i < n}, j < m, checked for covering.
inline std::vector<SubsystemMask> window_subsystems(int num_qubits, int n, int m) {
  require(n >= 1 && n <= num_qubits, "window_subsystems: need 1 <= n <= N");
  require(m >= 1, "window_subsystems: m must be positive");
  std::vector<SubsystemMask> out;
  for (int j = 0; j < m; ++j) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i) s.push_back((j * n + i) % num_qubits);
    out.push_back(SubsystemMask::from_unsorted(std::move(s)));
  }
  check_covering(num_qubits, out);
  return out;
}

inline std::vector<SubsystemMask> subsystem_family(int num_qubits, int n, const SubsystemScheme& scheme) {
  require(n >= 1, "subsystem family: n must be positive");
  require(2 * n <= num_qubits, "subsystem family: n must not exceed N/2");
  switch (scheme.kind) {
    case SchemeKind::contiguous: return contiguous_subsystems(num_qubits, n);
    case SchemeKind::all_subsets: return all_subsets(num_qubits, n);
    case SchemeKind::windows: return window_subsystems(num_qubits, n, scheme.m);
  }
  throw InvalidArgument("subsystem family: unknown scheme");
}

inline double subsystem_average_entropy(const PureState& psi, int n, const SubsystemScheme& scheme) {
  const auto family = subsystem_family(psi.num_qubits(), n, scheme);
  double s = 0.0;
  for (const auto& a : family) s += qcore::von_neumann_entropy(qcore::partial_trace(psi, a));
  return s / static_cast<double>(family.size());
}

inline double subsystem_average_entropy(const DensityMatrix& rho, int n, const SubsystemScheme& scheme) {
  const auto family = subsystem_family(rho.num_qubits(), n, scheme);
  double s = 0.0;
  for (const auto& a : family) s += qcore::von_neumann_entropy(qcore::partial_trace(rho, a));
  return s / static_cast<double>(family.size());
}

// ---------------------------------------------------------------------------
// Two-qubit deviation bound S(rho) <= 2 ln 2 - eps^2 / 2
// ---------------------------------------------------------------------------

inline constexpr double kTwoSiteTolerance = 1e-9;

inline double two_site_entropy_bound(double eps) { return 2.0 * kLn2 - 0.5 * eps * eps; }

inline CertificateReport two_site_check(const DensityMatrix& rho, const HermitianOperator& h) {
  require(rho.dim() == 4 && h.dim() == 4, "two_site_check: two-qubit state and operator required");
  if (!h.is_traceless()) throw InvalidArgument("two_site_check: H_j must be traceless");
  const double norm = h.operator_norm();
  require(norm > 0.0, "two_site_check: H_j must be nonzero");
  const double eps = std::abs(qcore::expectation_value(rho, h)) / norm;
  return CertificateReport::make("two_site", qcore::von_neumann_entropy(rho), two_site_entropy_bound(eps), kTwoSiteTolerance, 0.0,
                                 CheckKind::exact, {{"epsilon", eps}});
}

/// The three spectra that extremise the entropy at trace distance eps from
/// I/4 (the third exists only for eps <= 1/2).
inline std::vector<std::array<double, 4>> extremal_spectra(double eps) {
  std::vector<std::array<double, 4>> out{
      {0.25 + eps / 4, 0.25 + eps / 4, 0.25 - eps / 4, 0.25 - eps / 4},
      {0.25 + eps / 2, 0.25 - eps / 6, 0.25 - eps / 6, 0.25 - eps / 6},
  };
  if (eps <= 0.5) out.push_back({0.25 - eps / 2, 0.25 + eps / 6, 0.25 + eps / 6, 0.25 + eps / 6});
  return out;
}

inline double spectrum_entropy(const std::array<double, 4>& p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s -= x * std::log(x);
  return s;
}

/// Sweeps the extremal spectra over eps = 0, step, ..., 1.
inline InequalityTally two_site_extremal_sweep(double step = 1e-3) {
  require(step > 0.0 && step <= 1.0, "two_site_extremal_sweep: step must lie in (0, 1]");
  InequalityTally tally("two_site_extremal_sweep", kTwoSiteTolerance);
  const auto count = static_cast<int>(std::lround(1.0 / step));
  for (int i = 0; i <= count; ++i) {
    const double eps = std::min(1.0, i * step);
    for (const auto& p : extremal_spectra(eps)) tally.add(spectrum_entropy(p), two_site_entropy_bound(eps));
  }
  return tally;
}

}  // namespace entdyn::bounds

#endif  // ENTDYN_BOUNDS_ENTROPY_HPP
