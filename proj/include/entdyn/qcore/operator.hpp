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

#ifndef ENTDYN_QCORE_OPERATOR_HPP
#define ENTDYN_QCORE_OPERATOR_HPP

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "entdyn/common.hpp"
#include "entdyn/qcore/state.hpp"

namespace entdyn::qcore {

enum class Pauli : char { X = 'X', Y = 'Y', Z = 'Z' };

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: throw InvalidArgument(std::string("unknown Pauli label '") + c + "'");
  }
}

/// X/Z bit masks of a Pauli word in basis-bit positions. The word denotes
/// i^{|x&z|} X^x Z^z, so a Y factor is a set bit in both masks.
struct PauliWord {
  std::uint64_t x = 0;
  std::uint64_t z = 0;

  int num_y() const { return popcount(x & z); }
};

/// Product of two words: w1 * w2 = i^{phase} * result. Returns (phase mod 4, result).
inline std::pair<int, PauliWord> multiply(const PauliWord& a, const PauliWord& b) {
  PauliWord r{a.x ^ b.x, a.z ^ b.z};
  int phase = a.num_y() + b.num_y() + 2 * popcount(a.z & b.x) - r.num_y();
  phase = ((phase % 4) + 4) % 4;
  return {phase, r};
}

/// Weighted tensor product of single-site Paulis; absent sites carry identity.
class PauliString {
 public:
  PauliString(double coefficient, std::map<int, Pauli> factors)
      : coefficient_(coefficient), factors_(std::move(factors)) {
    require(std::isfinite(coefficient_) && coefficient_ != 0.0, "PauliString: coefficient must be finite and nonzero");
    for (const auto& [site, p] : factors_) require(site >= 0, "PauliString: negative site");
  }

  /// Parses "X0 Z3" style labels: each token is a Pauli letter followed by a site.
  static PauliString parse(double coefficient, const std::string& label) {
    std::map<int, Pauli> f;
    std::size_t i = 0;
    while (i < label.size()) {
      if (label[i] == ' ') { ++i; continue; }
      const Pauli p = pauli_from_char(label[i++]);
      std::size_t j = i;
      while (j < label.size() && label[j] >= '0' && label[j] <= '9') ++j;
      require(j > i, "PauliString::parse: missing site index in '" + label + "'");
      const int site = std::stoi(label.substr(i, j - i));
      require(!f.contains(site), "PauliString::parse: repeated site in '" + label + "'");
      f.emplace(site, p);
      i = j;
    }
    return PauliString(coefficient, std::move(f));
  }

  double coefficient() const { return coefficient_; }
  const std::map<int, Pauli>& factors() const { return factors_; }
  bool is_identity() const { return factors_.empty(); }
  int max_site() const { return factors_.empty() ? -1 : factors_.rbegin()->first; }

  PauliWord word(int num_qubits) const {
    PauliWord w;
    for (const auto& [site, p] : factors_) {
      const std::uint64_t bit = basis_bit(site, num_qubits);
      if (p != Pauli::Z) w.x |= bit;
      if (p != Pauli::X) w.z |= bit;
    }
    return w;
  }

  PauliString scaled(double s) const { return PauliString(coefficient_ * s, factors_); }

  std::string label() const {
    std::string out;
    for (const auto& [site, p] : factors_) {
      if (!out.empty()) out += ' ';
      out += static_cast<char>(p);
      out += std::to_string(site);
    }
    return out.empty() ? "I" : out;
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  double coefficient_;
  std::map<int, Pauli> factors_;
};

/// Converts a basis-bit Pauli word back to a site map (no phase).
inline std::map<int, Pauli> factors_of(const PauliWord& w, int num_qubits) {
  std::map<int, Pauli> f;
  for (int q = 0; q < num_qubits; ++q) {
    const std::uint64_t bit = basis_bit(q, num_qubits);
    const bool x = (w.x & bit) != 0, z = (w.z & bit) != 0;
    if (x && z) f.emplace(q, Pauli::Y);
    else if (x) f.emplace(q, Pauli::X);
    else if (z) f.emplace(q, Pauli::Z);
  }
  return f;
}

/// Eigendecomposition H = V diag(lambda) V^dagger, eigenvalues ascending.
struct Spectrum {
  RVector eigenvalues;
  CMatrix eigenvectors;

  Eigen::Index dim() const { return eigenvalues.size(); }
  double operator_norm() const {
    return eigenvalues.size() == 0 ? 0.0 : std::max(std::abs(eigenvalues(0)), std::abs(eigenvalues(eigenvalues.size() - 1)));
  }
};

inline double hermitian_deviation(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Dense Hermitian eigensolver; rejects matrices that are not Hermitian to
/// 1e-10 relative to their largest entry.
inline Spectrum eigendecompose(const CMatrix& m) {
  require(m.rows() == m.cols(), "eigendecompose: matrix must be square");
  const double scale = std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
  if (hermitian_deviation(m) > tol::kHermitian * scale) throw InvalidArgument("eigendecompose: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecompose: eigensolver did not converge");
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

/// Sum of Pauli strings on `num_qubits` qubits, or a raw dense Hermitian
/// matrix. The dense matrix and spectrum are computed once on first use and
/// shared between copies; both are immutable afterwards.
class HermitianOperator {
 public:
  HermitianOperator(int num_qubits, std::vector<PauliString> terms)
      : num_qubits_(num_qubits), terms_(std::move(terms)), cache_(std::make_shared<Cache>()) {
    require(num_qubits_ >= 1 && num_qubits_ <= 62, "HermitianOperator: num_qubits out of range");
    for (const auto& t : terms_) {
      require(t.max_site() < num_qubits_, "HermitianOperator: term " + t.label() + " acts outside the register");
    }
  }

  static HermitianOperator zero(int num_qubits) { return HermitianOperator(num_qubits, {}); }

  static HermitianOperator from_dense(CMatrix matrix) {
    const auto d = static_cast<std::uint64_t>(matrix.rows());
    require(matrix.rows() == matrix.cols() && std::has_single_bit(d), "HermitianOperator::from_dense: need a 2^N square matrix");
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    if (hermitian_deviation(matrix) > tol::kHermitian * scale) {
      throw InvalidArgument("HermitianOperator::from_dense: matrix is not Hermitian");
    }
    HermitianOperator op(std::countr_zero(d), {});
    op.dense_only_ = true;
    std::call_once(op.cache_->dense_once, [&] { op.cache_->dense = std::move(matrix); });
    return op;
  }

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(dimension_of(num_qubits_)); }
  const std::vector<PauliString>& terms() const { return terms_; }
  bool is_pauli_sum() const { return !dense_only_; }

  /// True iff the identity component vanishes exactly (Pauli form) or the
  /// trace is zero to rounding (dense form).
  bool is_traceless() const {
    if (dense_only_) return std::abs(dense().trace()) <= 1e-12 * static_cast<double>(dim()) * std::max(1.0, dense().cwiseAbs().maxCoeff());
    double identity = 0.0;
    for (const auto& t : terms_)
      if (t.is_identity()) identity += t.coefficient();
    return identity == 0.0;
  }

  const CMatrix& dense() const {
    std::call_once(cache_->dense_once, [this] { cache_->dense = build_dense(); });
    return cache_->dense;
  }

  const Spectrum& spectrum() const {
    std::call_once(cache_->spectrum_once, [this] { cache_->spectrum = eigendecompose(dense()); });
    return cache_->spectrum;
  }

  double operator_norm() const { return spectrum().operator_norm(); }

  /// H |v>. Uses the Pauli terms directly, so no dense matrix is formed.
  CVector apply(const CVector& v) const {
    require(v.size() == dim(), "HermitianOperator::apply: dimension mismatch");
    if (dense_only_) return dense() * v;
    CVector out = CVector::Zero(v.size());
    for (const auto& t : terms_) {
      const PauliWord w = t.word(num_qubits_);
      const Complex base = t.coefficient() * i_power(w.num_y());
      for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(v.size()); ++b) {
        const double sign = (popcount(b & w.z) & 1) ? -1.0 : 1.0;
        out(static_cast<Eigen::Index>(b ^ w.x)) += base * sign * v(static_cast<Eigen::Index>(b));
      }
    }
    return out;
  }

  HermitianOperator scaled(double s) const {
    if (dense_only_) return from_dense(dense() * s);
    std::vector<PauliString> t;
    t.reserve(terms_.size());
    for (const auto& p : terms_)
      if (s != 0.0) t.push_back(p.scaled(s));
    return HermitianOperator(num_qubits_, std::move(t));
  }

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    require(a.num_qubits_ == b.num_qubits_, "HermitianOperator: register size mismatch");
    if (a.dense_only_ || b.dense_only_) return from_dense(a.dense() + b.dense());
    std::vector<PauliString> t = a.terms_;
    t.insert(t.end(), b.terms_.begin(), b.terms_.end());
    return HermitianOperator(a.num_qubits_, std::move(t));
  }

 private:
  struct Cache {
    std::once_flag dense_once;
    std::once_flag spectrum_once;
    CMatrix dense;
    Spectrum spectrum;
  };

  static Complex i_power(int k) {
    switch (((k % 4) + 4) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }

  CMatrix build_dense() const {
    require_dense_size(num_qubits_);
    const Eigen::Index d = dim();
    CMatrix m = CMatrix::Zero(d, d);
    for (const auto& t : terms_) {
      const PauliWord w = t.word(num_qubits_);
      const Complex base = t.coefficient() * i_power(w.num_y());
      for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(d); ++b) {
        const double sign = (popcount(b & w.z) & 1) ? -1.0 : 1.0;
        m(static_cast<Eigen::Index>(b ^ w.x), static_cast<Eigen::Index>(b)) += base * sign;
      }
    }
    return m;
  }

  int num_qubits_;
  std::vector<PauliString> terms_;
  bool dense_only_ = false;
  std::shared_ptr<Cache> cache_;
};

/// Terms of `op` supported entirely inside `mask`, relabelled to local
/// indices (the k-th site of the mask becomes local qubit k).
inline HermitianOperator restrict_terms(const HermitianOperator& op, const SubsystemMask& mask) {
  require(op.is_pauli_sum(), "restrict_terms: operator has no Pauli form");
  require(!mask.empty(), "restrict_terms: empty mask");
  mask.check_within(op.num_qubits());
  std::vector<PauliString> local;
  for (const auto& t : op.terms()) {
    std::map<int, Pauli> f;
    bool inside = true;
    for (const auto& [site, p] : t.factors()) {
      const int li = mask.local_index(site);
      if (li < 0) { inside = false; break; }
      f.emplace(li, p);
    }
    if (inside) local.emplace_back(t.coefficient(), std::move(f));
  }
  return HermitianOperator(mask.size(), std::move(local));
}

/// Inverse relabelling of restrict_terms: the local operator tensored with
/// identity on the complement of `mask`.
inline HermitianOperator embed(const HermitianOperator& local, const SubsystemMask& mask, int num_qubits) {
  require(local.is_pauli_sum(), "embed: operator has no Pauli form");
  require(local.num_qubits() == mask.size(), "embed: mask size does not match operator");
  mask.check_within(num_qubits);
  std::vector<PauliString> out;
  out.reserve(local.terms().size());
  for (const auto& t : local.terms()) {
    std::map<int, Pauli> f;
    for (const auto& [site, p] : t.factors()) f.emplace(mask.sites()[static_cast<std::size_t>(site)], p);
    out.emplace_back(t.coefficient(), std::move(f));
  }
  return HermitianOperator(num_qubits, std::move(out));
}

/// Total charge sigma^z = sum_j sigma^z_j.
inline HermitianOperator total_sigma_z(int num_qubits) {
  std::vector<PauliString> t;
  for (int q = 0; q < num_qubits; ++q) t.emplace_back(1.0, std::map<int, Pauli>{{q, Pauli::Z}});
  return HermitianOperator(num_qubits, std::move(t));
}

}  // namespace entdyn::qcore

#endif  // ENTDYN_QCORE_OPERATOR_HPP
