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

#ifndef ENTDYN_QCORE_STATE_HPP
#define ENTDYN_QCORE_STATE_HPP

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "entdyn/common.hpp"

namespace entdyn::qcore {

/// Normalised amplitude vector of an N-qubit register (qubit 0 = MSB).
class PureState {
 public:
  PureState(int num_qubits, CVector amplitudes) : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    require(num_qubits_ >= 1 && num_qubits_ <= 62, "PureState: num_qubits out of range");
    require(static_cast<std::uint64_t>(amplitudes_.size()) == dimension_of(num_qubits_),
            "PureState: amplitude vector has length " + std::to_string(amplitudes_.size()) +
                ", expected 2^" + std::to_string(num_qubits_));
    const double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > tol::kNorm) {
      throw InvalidArgument("PureState: amplitudes not normalised (norm " + std::to_string(norm) + ")");
    }
  }

  /// Rescales `amplitudes` to unit norm before construction.
  static PureState normalized(int num_qubits, CVector amplitudes) {
    const double norm = amplitudes.norm();
    require(norm > 0.0, "PureState::normalized: zero vector");
    amplitudes /= norm;
    return PureState(num_qubits, std::move(amplitudes));
  }

  static PureState basis(int num_qubits, std::uint64_t index) {
    require(num_qubits >= 1 && num_qubits <= 62, "PureState::basis: num_qubits out of range");
    require(index < dimension_of(num_qubits), "PureState::basis: index out of range");
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dimension_of(num_qubits)));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState(num_qubits, std::move(v));
  }

  /// Tensor product of single-qubit states, qubit 0 first.
  static PureState product(const std::vector<Eigen::Vector2cd>& factors) {
    require(!factors.empty(), "PureState::product: no factors");
    CVector v(1);
    v(0) = 1.0;
    for (const auto& f : factors) {
      CVector next(v.size() * 2);
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        next(2 * i) = v(i) * f(0);
        next(2 * i + 1) = v(i) * f(1);
      }
      v = std::move(next);
    }
    return normalized(static_cast<int>(factors.size()), std::move(v));
  }

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const CVector& amplitudes() const { return amplitudes_; }

 private:
  int num_qubits_;
  CVector amplitudes_;
};

/// Unit-trace Hermitian matrix. The dimension need not be a power of two so
/// that bipartite Haar states with arbitrary (d_A, d_B) share the type.
/// Positivity is enforced lazily by the spectral functionals.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix matrix) : matrix_(std::move(matrix)) {
    require(matrix_.rows() == matrix_.cols() && matrix_.rows() >= 1, "DensityMatrix: matrix must be square");
    const double asym = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tol::kHermitian) {
      throw NumericalError("DensityMatrix: not Hermitian (deviation " + std::to_string(asym) + ")");
    }
    const double tr_err = std::abs(matrix_.trace() - Complex(1.0, 0.0));
    if (tr_err > tol::kTrace) {
      throw NumericalError("DensityMatrix: trace deviates from 1 by " + std::to_string(tr_err));
    }
    // Remove the sub-tolerance anti-Hermitian residue.
    matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
  }

  static DensityMatrix maximally_mixed(Eigen::Index dim) {
    return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
  }

  static DensityMatrix from_pure(const PureState& psi) {
    return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
  }

  static DensityMatrix diagonal(const RVector& probabilities) {
    return DensityMatrix(probabilities.cast<Complex>().asDiagonal().toDenseMatrix());
  }

  Eigen::Index dim() const { return matrix_.rows(); }

  /// log2(dim); throws if the dimension is not a power of two.
  int num_qubits() const {
    const auto d = static_cast<std::uint64_t>(dim());
    if (!std::has_single_bit(d)) throw InvalidArgument("DensityMatrix: dimension is not a power of two");
    return std::countr_zero(d);
  }

  const CMatrix& matrix() const { return matrix_; }

 private:
  CMatrix matrix_;
};

/// Strictly increasing list of site indices.
class SubsystemMask {
 public:
  SubsystemMask() = default;
  SubsystemMask(std::initializer_list<int> sites) : SubsystemMask(std::vector<int>(sites)) {}
  explicit SubsystemMask(std::vector<int> sites) : sites_(std::move(sites)) {
    for (std::size_t i = 0; i < sites_.size(); ++i) {
      require(sites_[i] >= 0, "SubsystemMask: negative site index");
      if (i > 0) require(sites_[i] > sites_[i - 1], "SubsystemMask: sites must be strictly increasing");
    }
  }

  /// Sorts and deduplicates an arbitrary site list (e.g. a wrapping window).
  static SubsystemMask from_unsorted(std::vector<int> sites) {
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    return SubsystemMask(std::move(sites));
  }

  static SubsystemMask range(int first, int count) {
    std::vector<int> s(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) s[static_cast<std::size_t>(i)] = first + i;
    return SubsystemMask(std::move(s));
  }

  const std::vector<int>& sites() const { return sites_; }
  int size() const { return static_cast<int>(sites_.size()); }
  bool empty() const { return sites_.empty(); }
  bool contains(int site) const { return std::binary_search(sites_.begin(), sites_.end(), site); }

  /// Local index of `site` inside the mask, or -1.
  int local_index(int site) const {
    auto it = std::lower_bound(sites_.begin(), sites_.end(), site);
    return (it != sites_.end() && *it == site) ? static_cast<int>(it - sites_.begin()) : -1;
  }

  void check_within(int num_qubits) const {
    for (int s : sites_) {
      if (s >= num_qubits) {
        throw InvalidArgument("SubsystemMask: site " + std::to_string(s) + " outside [0, " +
                              std::to_string(num_qubits) + ")");
      }
    }
  }

  SubsystemMask complement(int num_qubits) const {
    std::vector<int> rest;
    for (int q = 0; q < num_qubits; ++q)
      if (!contains(q)) rest.push_back(q);
    return SubsystemMask(std::move(rest));
  }

  std::string to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < sites_.size(); ++i) out += (i ? "," : "") + std::to_string(sites_[i]);
    return out + "}";
  }

  friend bool operator==(const SubsystemMask&, const SubsystemMask&) = default;

 private:
  std::vector<int> sites_;
};

}  // namespace entdyn::qcore

#endif  // ENTDYN_QCORE_STATE_HPP
