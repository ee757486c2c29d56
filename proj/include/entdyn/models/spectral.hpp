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

#ifndef ENTDYN_MODELS_SPECTRAL_HPP
#define ENTDYN_MODELS_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "entdyn/common.hpp"
#include "entdyn/qcore/operator.hpp"

namespace entdyn::models {

struct GapReport {
  bool ok = true;
  /// Smallest separation between two distinct gaps, or the smallest level
  /// spacing if that is smaller (a repeated zero gap).
  double worst_collision = std::numeric_limits<double>::infinity();
  std::size_t num_gaps = 0;
  double tolerance = 0.0;
};

/// Largest spectrum the gap check accepts (2^13 levels, ~3.4e7 gaps).
inline constexpr Eigen::Index kMaxGapCheckDim = Eigen::Index{1} << 13;

/// Non-degenerate gap test: every difference E_j - E_k (j != k) must be
/// distinct. Differences come in +/- pairs, so it suffices that the levels
/// are non-degenerate and that the D(D-1)/2 positive differences are
/// pairwise separated by more than `tol`.
inline GapReport check_nondegenerate_gaps(const RVector& eigenvalues, double tol) {
  require(tol >= 0.0, "check_nondegenerate_gaps: negative tolerance");
  const Eigen::Index d = eigenvalues.size();
  if (d > kMaxGapCheckDim) throw ResourceError("check_nondegenerate_gaps: spectrum too large for the gap table");
  for (Eigen::Index i = 1; i < d; ++i) {
    require(eigenvalues(i) >= eigenvalues(i - 1), "check_nondegenerate_gaps: eigenvalues must be ascending");
  }
  GapReport report;
  report.tolerance = tol;
  if (d < 2) return report;

  std::vector<double> gaps;
  gaps.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(d - 1) / 2);
  for (Eigen::Index j = 1; j < d; ++j)
    for (Eigen::Index k = 0; k < j; ++k) gaps.push_back(eigenvalues(j) - eigenvalues(k));
  std::sort(gaps.begin(), gaps.end());
  report.num_gaps = 2 * gaps.size();

  // gaps[0] is the smallest level spacing; a zero gap repeats as E_j-E_k = E_k-E_j.
  double worst = 2.0 * gaps.front();
  for (std::size_t i = 1; i < gaps.size(); ++i) worst = std::min(worst, gaps[i] - gaps[i - 1]);
  report.worst_collision = worst;
  report.ok = worst > tol;
  return report;
}

inline double default_gap_tolerance(const qcore::HermitianOperator& h) { return 1e-8 * h.operator_norm(); }

}  // namespace entdyn::models

#endif  // ENTDYN_MODELS_SPECTRAL_HPP
