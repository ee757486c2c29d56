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

#ifndef ENTDYN_SAMPLING_HPP
#define ENTDYN_SAMPLING_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "entdyn/common.hpp"
#include "entdyn/models/disorder.hpp"
#include "entdyn/parallel.hpp"
#include "entdyn/qcore.hpp"
#include "entdyn/random.hpp"
#include "entdyn/stats.hpp"

namespace entdyn::sampling {

using qcore::DensityMatrix;
using qcore::HermitianOperator;
using qcore::PureState;

enum class EnsembleKind { haar_qubit_product, haar_bipartite, computational_basis };

inline std::string to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::haar_qubit_product: return "haar_qubit_product";
    case EnsembleKind::haar_bipartite: return "haar_bipartite";
    case EnsembleKind::computational_basis: return "computational_basis";
  }
  return "?";
}

inline EnsembleKind ensemble_kind_from_string(const std::string& s) {
  if (s == "haar_qubit_product") return EnsembleKind::haar_qubit_product;
  if (s == "haar_bipartite") return EnsembleKind::haar_bipartite;
  if (s == "computational_basis") return EnsembleKind::computational_basis;
  throw InvalidArgument("unknown ensemble kind '" + s + "'");
}

/// Sample i of an ensemble uses the seed derive_seed(seed, i).
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::haar_qubit_product;
  int num_qubits = 0;
  int d_a = 0;
  int d_b = 0;
  std::uint64_t seed = 0;
  int num_samples = 1;
  /// computational_basis only: a fixed basis state instead of a uniform draw.
  std::optional<std::uint64_t> basis_index;

  Eigen::Index dim() const {
    return kind == EnsembleKind::haar_bipartite ? Eigen::Index{d_a} * d_b : static_cast<Eigen::Index>(dimension_of(num_qubits));
  }

  void validate() const {
    require(num_samples >= 1, "ensemble: num_samples must be at least 1");
    if (kind == EnsembleKind::haar_bipartite) {
      require(d_a >= 1 && d_b >= 1, "ensemble: d_a and d_b must be positive");
      require(d_a <= d_b, "ensemble: d_a must not exceed d_b");
    } else {
      require(num_qubits >= 1, "ensemble: num_qubits must be at least 1");
      require_dense_size(num_qubits);
      if (basis_index) require(*basis_index < dimension_of(num_qubits), "ensemble: basis_index out of range");
    }
  }
};

/// Haar single-qubit state: a normalised pair of complex Gaussians.
inline Eigen::Vector2cd haar_qubit(Rng& rng) {
  Eigen::Vector2cd v(complex_normal(rng), complex_normal(rng));
  return v / v.norm();
}

inline std::vector<Eigen::Vector2cd> sample_haar_product_factors(int num_qubits, std::uint64_t seed) {
  require(num_qubits >= 1, "sample_haar_product_state: need at least 1 qubit");
  Rng rng(seed);
  std::vector<Eigen::Vector2cd> f(static_cast<std::size_t>(num_qubits));
  for (auto& q : f) q = haar_qubit(rng);
  return f;
}

inline PureState sample_haar_product_state(int num_qubits, std::uint64_t seed) {
  require_dense_size(num_qubits);
  return PureState::product(sample_haar_product_factors(num_qubits, seed));
}

/// Bloch vector (<X>, <Y>, <Z>) of a single-qubit pure state.
inline Eigen::Vector3d bloch_vector(const Eigen::Vector2cd& q) {
  const Complex c = std::conj(q(0)) * q(1);
  return {2.0 * c.real(), 2.0 * c.imag(), std::norm(q(0)) - std::norm(q(1))};
}

/// Pure state on C^{d_a} (x) C^{d_b}, amplitude index a * d_b + b.
struct BipartiteState {
  int d_a = 0;
  int d_b = 0;
  CVector amplitudes;

  DensityMatrix reduced_a() const { return qcore::reduce_bipartite(amplitudes, d_a, d_b); }
  DensityMatrix reduced_b() const {
    // swap the factors and reuse the A-side reduction
    CVector swapped(amplitudes.size());
    for (Eigen::Index a = 0; a < d_a; ++a)
      for (Eigen::Index b = 0; b < d_b; ++b) swapped(b * d_a + a) = amplitudes(a * d_b + b);
    return qcore::reduce_bipartite(swapped, d_b, d_a);
  }
};

inline BipartiteState sample_haar_bipartite(int d_a, int d_b, std::uint64_t seed) {
  require(d_a >= 1 && d_b >= 1, "sample_haar_bipartite: dimensions must be positive");
  if (d_a > d_b) throw InvalidArgument("sample_haar_bipartite: d_a > d_b (the smaller factor must come first)");
  Rng rng(seed);
  CVector v(Eigen::Index{d_a} * d_b);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_normal(rng);
  v /= v.norm();
  return {d_a, d_b, std::move(v)};
}

/// Amplitude vector of sample i.
inline CVector sample_amplitudes(const EnsembleSpec& spec, std::size_t i) {
  const std::uint64_t seed = derive_seed(spec.seed, i);
  switch (spec.kind) {
    case EnsembleKind::haar_qubit_product: return sample_haar_product_state(spec.num_qubits, seed).amplitudes();
    case EnsembleKind::haar_bipartite: return sample_haar_bipartite(spec.d_a, spec.d_b, seed).amplitudes;
    case EnsembleKind::computational_basis: {
      std::uint64_t index = 0;
      if (spec.basis_index) {
        index = *spec.basis_index;
      } else {
        Rng rng(seed);
        index = std::uniform_int_distribution<std::uint64_t>(0, dimension_of(spec.num_qubits) - 1)(rng);
      }
      return PureState::basis(spec.num_qubits, index).amplitudes();
    }
  }
  throw InvalidArgument("sample_amplitudes: unknown ensemble");
}

/// Qubit-register sample (product or basis ensembles).
inline PureState sample_state(const EnsembleSpec& spec, std::size_t i) {
  require(spec.kind != EnsembleKind::haar_bipartite, "sample_state: bipartite ensemble has no qubit register");
  return PureState(spec.num_qubits, sample_amplitudes(spec, i));
}

struct EnergyStatistics {
  stats::MeanEstimate value;      // <H>
  stats::MeanEstimate abs_value;  // |<H>|
  double stddev = 0.0;
  double threshold = 0.0;         // c sqrt(N)
  double fraction_above = 0.0;    // Pr(|<H>| >= threshold)
  std::size_t count = 0;

  nlohmann::json to_json() const {
    return {{"mean", value.mean},         {"mean_std_error", value.std_error}, {"mean_abs", abs_value.mean},
            {"mean_abs_std_error", abs_value.std_error}, {"std", stddev},     {"threshold", threshold},
            {"fraction_above_threshold", fraction_above}, {"samples", count}};
  }
};

inline constexpr int kMinEnergySamples = 100;

inline EnergyStatistics summarize_energies(const std::vector<double>& e, double threshold) {
  EnergyStatistics s;
  std::vector<double> a(e.size());
  std::size_t above = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    a[i] = std::abs(e[i]);
    if (a[i] >= threshold) ++above;
  }
  s.value = stats::estimate_mean(e);
  s.abs_value = stats::estimate_mean(a);
  s.stddev = s.value.stddev;
  s.threshold = threshold;
  s.fraction_above = static_cast<double>(above) / static_cast<double>(e.size());
  s.count = e.size();
  return s;
}

/// Statistics of <Psi|H|Psi> over an initial-state ensemble; the threshold
/// is c sqrt(N).
inline EnergyStatistics energy_statistics(const HermitianOperator& h, const EnsembleSpec& ensemble, double c, int jobs = 1) {
  ensemble.validate();
  if (ensemble.num_samples < kMinEnergySamples) throw InvalidArgument("energy_statistics: need at least 100 samples");
  require(ensemble.dim() == h.dim(), "energy_statistics: ensemble dimension does not match the operator");
  const auto e = parallel_map(static_cast<std::size_t>(ensemble.num_samples), jobs, [&](std::size_t i) {
    return qcore::expectation_value(PureState(h.num_qubits(), sample_amplitudes(ensemble, i)), h);
  });
  return summarize_energies(e, c * std::sqrt(static_cast<double>(h.num_qubits())));
}

/// Statistics of <psi|H_J|psi> over disorder for a fixed state; sample i
/// uses build(derive_seed(seed, i)).
inline EnergyStatistics disorder_energy_statistics(const std::function<models::DisorderSample(std::uint64_t)>& build, const PureState& psi,
                                                   int num_disorder, std::uint64_t seed, double c, int jobs = 1) {
  if (num_disorder < kMinEnergySamples) throw InvalidArgument("energy_statistics: need at least 100 samples");
  const auto e = parallel_map(static_cast<std::size_t>(num_disorder), jobs, [&](std::size_t i) {
    return qcore::expectation_value(psi, build(derive_seed(seed, i)).hamiltonian);
  });
  return summarize_energies(e, c * std::sqrt(static_cast<double>(psi.num_qubits())));
}

/// Interleaved [re0, im0, re1, im1, ...].
inline nlohmann::json amplitudes_to_json(const CVector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    a.push_back(v(i).real());
    a.push_back(v(i).imag());
  }
  return a;
}

inline CVector amplitudes_from_json(const nlohmann::json& j) {
  require(j.is_array() && j.size() % 2 == 0, "amplitudes_from_json: expected an even-length array");
  CVector v(static_cast<Eigen::Index>(j.size() / 2));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = Complex(j[static_cast<std::size_t>(2 * i)].get<double>(), j[static_cast<std::size_t>(2 * i + 1)].get<double>());
  return v;
}

}  // namespace entdyn::sampling

#endif  // ENTDYN_SAMPLING_HPP
