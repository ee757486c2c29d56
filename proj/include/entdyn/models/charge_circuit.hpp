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

#ifndef ENTDYN_MODELS_CHARGE_CIRCUIT_HPP
#define ENTDYN_MODELS_CHARGE_CIRCUIT_HPP

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/QR>

#include "entdyn/common.hpp"
#include "entdyn/qcore.hpp"
#include "entdyn/random.hpp"

namespace entdyn::models {

struct ChargeCircuitSpec {
  int num_qubits = 0;
  int depth = 1;
  std::uint64_t seed = 0;
};

/// Gate on (first, second); matrix in the local basis |b_first b_second>.
struct TwoQubitGate {
  int first = 0;
  int second = 1;
  Eigen::Matrix4cd matrix;
};

/// Brickwork of charge-conserving gates. layers[d] holds the even-bond gates
/// followed by the odd-bond gates of layer d.
struct ChargeCircuit {
  int num_qubits = 0;
  std::vector<std::vector<TwoQubitGate>> layers;
};

/// Haar-random element of U(d) from QR of a complex Ginibre matrix with the
/// phases of R's diagonal folded into Q.
inline CMatrix haar_unitary(Eigen::Index d, Rng& rng) {
  CMatrix g(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r) g(r, c) = complex_normal(rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < d; ++i) {
    const Complex diag = r(i, i);
    q.col(i) *= diag / std::abs(diag);
  }
  return q;
}

/// Random gate block-diagonal in the local charge basis: a phase on |00>,
/// Haar U(2) on span{|01>, |10>}, a phase on |11>.
inline Eigen::Matrix4cd random_charge_conserving_gate(Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  Eigen::Matrix4cd g = Eigen::Matrix4cd::Zero();
  g(0, 0) = std::polar(1.0, angle(rng));
  g.block<2, 2>(1, 1) = haar_unitary(2, rng);
  g(3, 3) = std::polar(1.0, angle(rng));
  return g;
}

inline ChargeCircuit build_charge_circuit(const ChargeCircuitSpec& spec) {
  require(spec.num_qubits >= 2, "build_charge_circuit: need at least 2 qubits");
  require(spec.depth >= 0, "build_charge_circuit: negative depth");
  ChargeCircuit c{spec.num_qubits, {}};
  for (int d = 0; d < spec.depth; ++d) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(d)));
    std::vector<TwoQubitGate> layer;
    for (int parity = 0; parity < 2; ++parity)
      for (int q = parity; q + 1 < spec.num_qubits; q += 2) layer.push_back({q, q + 1, random_charge_conserving_gate(rng)});
    c.layers.push_back(std::move(layer));
  }
  return c;
}

inline void apply_gate(const TwoQubitGate& gate, int num_qubits, CVector& v) {
  const std::uint64_t b1 = basis_bit(gate.first, num_qubits), b2 = basis_bit(gate.second, num_qubits);
  const auto dim = static_cast<std::uint64_t>(v.size());
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & (b1 | b2)) continue;
    const std::uint64_t idx[4] = {base, base | b2, base | b1, base | b1 | b2};
    Eigen::Vector4cd local;
    for (int i = 0; i < 4; ++i) local(i) = v(static_cast<Eigen::Index>(idx[i]));
    local = gate.matrix * local;
    for (int i = 0; i < 4; ++i) v(static_cast<Eigen::Index>(idx[i])) = local(i);
  }
}

inline qcore::PureState apply_layer(const ChargeCircuit& circuit, std::size_t layer, const qcore::PureState& psi) {
  require(layer < circuit.layers.size(), "apply_layer: layer out of range");
  require(psi.num_qubits() == circuit.num_qubits, "apply_layer: register size mismatch");
  CVector v = psi.amplitudes();
  for (const auto& g : circuit.layers[layer]) apply_gate(g, circuit.num_qubits, v);
  return qcore::PureState::normalized(circuit.num_qubits, std::move(v));
}

/// Dense U = L_{depth-1} ... L_1 L_0 (identity at depth 0).
inline CMatrix circuit_unitary(const ChargeCircuit& circuit) {
  require_dense_size(circuit.num_qubits);
  const auto d = static_cast<Eigen::Index>(dimension_of(circuit.num_qubits));
  CMatrix u = CMatrix::Identity(d, d);
  for (const auto& layer : circuit.layers) {
    for (Eigen::Index c = 0; c < d; ++c) {
      CVector col = u.col(c);
      for (const auto& g : layer) apply_gate(g, circuit.num_qubits, col);
      u.col(c) = col;
    }
  }
  return u;
}

inline CMatrix build_charge_conserving_unitary(const ChargeCircuitSpec& spec) {
  return circuit_unitary(build_charge_circuit(spec));
}

}  // namespace entdyn::models

#endif  // ENTDYN_MODELS_CHARGE_CIRCUIT_HPP
