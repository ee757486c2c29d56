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

#ifndef ENTDYN_MODELS_MOMENTS_HPP
#define ENTDYN_MODELS_MOMENTS_HPP

#include <cmath>
#include <vector>

#include "entdyn/models/disorder.hpp"
#include "entdyn/parallel.hpp"
#include "entdyn/stats.hpp"

namespace entdyn::models {

/// Monte Carlo estimates of the normalised trace moments of the spin glass
/// for one k:
///   moment    = E_J tr(H^{2k}) / 2^N,      bounded by (2k-1)!!
///   sq_trace  = E_J tr(H^k)^2 / 2^{2N},    bounded by `moment` (RMS-AM).
struct MomentRow {
  int k = 0;
  stats::MeanEstimate moment;
  stats::MeanEstimate sq_trace;
  double bound = 0.0;
  bool moment_ok = false;
  bool rms_ok = false;
};

inline std::vector<MomentRow> trace_moment_check(int num_qubits, int k_max, int num_samples, std::uint64_t seed, int jobs = 1) {
  require(num_qubits >= 2 && num_qubits <= 10, "trace_moment_check: need 2 <= N <= 10");
  require(k_max >= 1 && k_max <= 4, "trace_moment_check: need 1 <= k_max <= 4");
  if (num_samples < 100) throw InvalidArgument("trace_moment_check: at least 100 samples are needed for a stable standard error");

  // Per sample: mean of lambda^p over the spectrum for p = 1..2 k_max.
  auto powers = parallel_map(static_cast<std::size_t>(num_samples), jobs, [&](std::size_t i) {
    const DisorderSample s = build_spin_glass(num_qubits, derive_seed(seed, i));
    const RVector& lam = s.hamiltonian.spectrum().eigenvalues;
    std::vector<double> p(static_cast<std::size_t>(2 * k_max + 1), 0.0);
    for (int e = 1; e <= 2 * k_max; ++e) p[static_cast<std::size_t>(e)] = lam.array().pow(e).mean();
    return p;
  });

  std::vector<MomentRow> rows;
  for (int k = 1; k <= k_max; ++k) {
    std::vector<double> m(powers.size()), sq(powers.size());
    for (std::size_t i = 0; i < powers.size(); ++i) {
      m[i] = powers[i][static_cast<std::size_t>(2 * k)];
      sq[i] = powers[i][static_cast<std::size_t>(k)] * powers[i][static_cast<std::size_t>(k)];
    }
    MomentRow r;
    r.k = k;
    r.moment = stats::estimate_mean(m);
    r.sq_trace = stats::estimate_mean(sq);
    r.bound = stats::double_factorial(2 * k - 1);
    r.moment_ok = r.moment.mean <= r.bound + 3.0 * r.moment.std_error;
    r.rms_ok = r.sq_trace.mean <= r.moment.mean + 3.0 * r.moment.std_error;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace entdyn::models

#endif  // ENTDYN_MODELS_MOMENTS_HPP
