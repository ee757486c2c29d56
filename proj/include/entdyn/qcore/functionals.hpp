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

#ifndef ENTDYN_QCORE_FUNCTIONALS_HPP
#define ENTDYN_QCORE_FUNCTIONALS_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "entdyn/common.hpp"
#include "entdyn/qcore/operator.hpp"
#include "entdyn/qcore/state.hpp"

namespace entdyn::qcore {

namespace detail {

/// Maps a (kept, traced) index pair back to the full basis index. Built once
/// per (N, mask) so the inner loops are table lookups.
struct BitSplit {
  std::vector<std::uint64_t> kept_offsets;    // size 2^|keep|
  std::vector<std::uint64_t> traced_offsets;  // size 2^(N-|keep|)

  BitSplit(int num_qubits, const SubsystemMask& keep) {
    const SubsystemMask rest = keep.complement(num_qubits);
    kept_offsets = offsets(num_qubits, keep.sites());
    traced_offsets = offsets(num_qubits, rest.sites());
  }

  static std::vector<std::uint64_t> offsets(int num_qubits, const std::vector<int>& sites) {
    const std::size_t k = sites.size();
    std::vector<std::uint64_t> out(std::size_t{1} << k, 0);
    for (std::size_t local = 0; local < out.size(); ++local) {
      std::uint64_t full = 0;
      for (std::size_t s = 0; s < k; ++s) {
        // local index uses the same MSB-first convention over the mask sites
        if (local & (std::size_t{1} << (k - 1 - s))) full |= basis_bit(sites[s], num_qubits);
      }
      out[local] = full;
    }
    return out;
  }
};

inline RVector hermitian_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  return solver.eigenvalues();
}

}  // namespace detail

/// Reduced state on `keep`, with the kept sites ordered increasingly (first
/// kept site = most significant local bit). Computed as M M^dagger where M is
/// the amplitude vector reshaped to (kept, traced).
inline DensityMatrix partial_trace(const PureState& psi, const SubsystemMask& keep) {
  require(!keep.empty(), "partial_trace: empty mask");
  keep.check_within(psi.num_qubits());
  const detail::BitSplit split(psi.num_qubits(), keep);
  const auto rows = static_cast<Eigen::Index>(split.kept_offsets.size());
  const auto cols = static_cast<Eigen::Index>(split.traced_offsets.size());
  CMatrix m(rows, cols);
  const CVector& a = psi.amplitudes();
  for (Eigen::Index c = 0; c < cols; ++c) {
    const std::uint64_t tb = split.traced_offsets[static_cast<std::size_t>(c)];
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = a(static_cast<Eigen::Index>(tb | split.kept_offsets[static_cast<std::size_t>(r)]));
  }
  CMatrix rho = m * m.adjoint();
  return DensityMatrix(std::move(rho));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, const SubsystemMask& keep) {
  require(!keep.empty(), "partial_trace: empty mask");
  const int n = rho.num_qubits();
  keep.check_within(n);
  const detail::BitSplit split(n, keep);
  const auto k = static_cast<Eigen::Index>(split.kept_offsets.size());
  CMatrix out = CMatrix::Zero(k, k);
  const CMatrix& m = rho.matrix();
  for (std::uint64_t tb : split.traced_offsets) {
    for (Eigen::Index c = 0; c < k; ++c) {
      const auto col = static_cast<Eigen::Index>(tb | split.kept_offsets[static_cast<std::size_t>(c)]);
      for (Eigen::Index r = 0; r < k; ++r) {
        out(r, c) += m(static_cast<Eigen::Index>(tb | split.kept_offsets[static_cast<std::size_t>(r)]), col);
      }
    }
  }
  return DensityMatrix(std::move(out));
}

/// Reduced state of the first factor of a d_A x d_B vector (index a*d_B + b).
inline DensityMatrix reduce_bipartite(const CVector& psi, Eigen::Index d_a, Eigen::Index d_b) {
  require(psi.size() == d_a * d_b, "reduce_bipartite: dimension mismatch");
  // Eigen is column-major, so this map is M^T with M(a, b) = psi(a*d_B + b).
  Eigen::Map<const CMatrix> mt(psi.data(), d_b, d_a);
  CMatrix rho = (mt.transpose() * mt.conjugate()).eval();
  return DensityMatrix(std::move(rho));
}

/// Eigenvalues of rho with [-1e-9, 0) clipped to zero; anything lower throws.
inline RVector clipped_spectrum(const DensityMatrix& rho) {
  RVector p = detail::hermitian_eigenvalues(rho.matrix());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) < -tol::kNegativeEig) {
      throw NumericalError("density matrix has eigenvalue " + std::to_string(p(i)) + " below -1e-9");
    }
    if (p(i) < 0.0) p(i) = 0.0;
  }
  return p;
}

/// Shannon entropy (nats) of a probability vector; 0 ln 0 := 0.
inline double shannon_entropy(const RVector& p) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) > 0.0) s -= p(i) * std::log(p(i));
  return s;
}

inline double von_neumann_entropy(const DensityMatrix& rho) { return shannon_entropy(clipped_spectrum(rho)); }

inline double purity(const DensityMatrix& rho) { return rho.matrix().squaredNorm(); }

inline double renyi2_entropy(const DensityMatrix& rho) { return -std::log(purity(rho)); }

inline double trace_norm_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require(rho.dim() == sigma.dim(), "trace_norm_distance: dimension mismatch");
  CMatrix diff = rho.matrix() - sigma.matrix();
  return detail::hermitian_eigenvalues(diff).cwiseAbs().sum();
}

/// Largest entropy difference compatible with trace distance T = ||rho - rho'||_1 / 2
/// on a D-dimensional space (Fannes-Audenaert).
inline double fannes_audenaert_bound(double trace_distance, Eigen::Index dim) {
  const double t = std::clamp(trace_distance, 0.0, 1.0);
  auto xlogx = [](double x) { return x > 0.0 ? x * std::log(x) : 0.0; };
  const double log_dm1 = dim > 1 ? std::log(static_cast<double>(dim - 1)) : 0.0;
  return t * log_dm1 - xlogx(t) - xlogx(1.0 - t);
}

namespace detail {
inline double real_checked(Complex value) {
  if (std::abs(value.imag()) > 1e-8 * std::max(1.0, std::abs(value.real()))) {
    throw NumericalError("expectation value has imaginary residue " + std::to_string(value.imag()));
  }
  return value.real();
}
}  // namespace detail

inline double expectation_value(const PureState& psi, const HermitianOperator& op) {
  require(psi.num_qubits() == op.num_qubits(), "expectation_value: dimension mismatch");
  return detail::real_checked(psi.amplitudes().dot(op.apply(psi.amplitudes())));
}

inline double expectation_value(const DensityMatrix& rho, const HermitianOperator& op) {
  require(rho.dim() == op.dim(), "expectation_value: dimension mismatch");
  // tr(rho H) = sum_ij rho_ij H_ji
  return detail::real_checked((rho.matrix().transpose().cwiseProduct(op.dense())).sum());
}

/// Boltzmann weights of a spectrum at inverse temperature beta, exponents
/// shifted by the extremal eigenvalue so that the largest weight is 1 before
/// normalisation.
inline RVector boltzmann_weights(const RVector& eigenvalues, double beta) {
  require(eigenvalues.size() > 0, "boltzmann_weights: empty spectrum");
  require(std::isfinite(beta), "boltzmann_weights: beta must be finite");
  const double ref = beta >= 0.0 ? eigenvalues.minCoeff() : eigenvalues.maxCoeff();
  RVector w = (-beta * (eigenvalues.array() - ref)).exp().matrix();
  return w / w.sum();
}

/// ln tr e^{-beta H}, evaluated stably.
inline double log_partition_function(const RVector& eigenvalues, double beta) {
  const double ref = beta >= 0.0 ? eigenvalues.minCoeff() : eigenvalues.maxCoeff();
  return -beta * ref + std::log((-beta * (eigenvalues.array() - ref)).exp().sum());
}

inline double log_partition_function(const HermitianOperator& h, double beta) {
  return log_partition_function(h.spectrum().eigenvalues, beta);
}

/// Energy and entropy of the Gibbs state of a spectrum; needs no eigenvectors.
struct ThermalValues {
  double energy;
  double entropy;
};

inline ThermalValues thermal_values(const RVector& eigenvalues, double beta) {
  const RVector w = boltzmann_weights(eigenvalues, beta);
  return {w.dot(eigenvalues), shannon_entropy(w)};
}

inline DensityMatrix thermal_state(const HermitianOperator& h, double beta) {
  const Spectrum& s = h.spectrum();
  const RVector w = boltzmann_weights(s.eigenvalues, beta);
  CMatrix rho = s.eigenvectors * w.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();
  return DensityMatrix(std::move(rho));
}

/// Inverse temperature whose Gibbs state of `eigenvalues` has mean energy
/// `energy`, found by bisection on the monotone energy curve.
inline double solve_beta_for_energy(const RVector& eigenvalues, double energy, double beta_bound = 1e3,
                                    double energy_tol = 1e-12) {
  const double lo_e = eigenvalues.minCoeff(), hi_e = eigenvalues.maxCoeff();
  require(energy > lo_e && energy < hi_e, "solve_beta_for_energy: energy outside the open spectral range");
  double lo = -beta_bound, hi = beta_bound;  // energy(lo) > target > energy(hi)
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double e = thermal_values(eigenvalues, mid).energy;
    if (std::abs(e - energy) <= energy_tol) return mid;
    if (e > energy) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace entdyn::qcore

#endif  // ENTDYN_QCORE_FUNCTIONALS_HPP
