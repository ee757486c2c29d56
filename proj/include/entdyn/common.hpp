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

#ifndef ENTDYN_COMMON_HPP
#define ENTDYN_COMMON_HPP

#include <bit>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace entdyn {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kLn2 = std::numbers::ln2;

/// Largest register the dense routines accept. A 2^14 x 2^14 complex matrix
/// is 4 GiB and its eigendecomposition is out of reach on a workstation.
inline constexpr int kMaxDenseQubits = 13;

/// Tolerance windows shared by every module.
namespace tol {
inline constexpr double kNorm = 1e-10;        // state normalisation
inline constexpr double kHermitian = 1e-10;   // ||M - M^dagger||_max
inline constexpr double kTrace = 1e-10;       // |tr rho - 1|
inline constexpr double kNegativeEig = 1e-9;  // eigenvalues in [-kNegativeEig, 0) clip to 0
inline constexpr double kExact = 1e-7;        // exact inequality certificates
}  // namespace tol

/// Raised when arguments violate an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical result breaks a type invariant (e.g. a density
/// matrix with an eigenvalue below -1e-9).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a request exceeds the dense-memory guard.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

inline void require_dense_size(int num_qubits) {
  if (num_qubits > kMaxDenseQubits) {
    throw ResourceError("dense realization refused for " + std::to_string(num_qubits) +
                        " qubits (limit " + std::to_string(kMaxDenseQubits) + ")");
  }
}

// Qubit ordering: qubit 0 is the most significant bit of a basis index, so
// |q0 q1 ... q_{N-1}> has index sum_q b_q 2^{N-1-q}. Every module relies on
// this through basis_bit().
inline constexpr std::uint64_t basis_bit(int qubit, int num_qubits) {
  return std::uint64_t{1} << (num_qubits - 1 - qubit);
}

inline constexpr std::uint64_t dimension_of(int num_qubits) { return std::uint64_t{1} << num_qubits; }

inline int popcount(std::uint64_t x) { return std::popcount(x); }

}  // namespace entdyn

#endif  // ENTDYN_COMMON_HPP
