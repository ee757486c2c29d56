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

#ifndef ENTDYN_RANDOM_HPP
#define ENTDYN_RANDOM_HPP

#include <cstdint>
#include <random>

#include "entdyn/common.hpp"

namespace entdyn {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser; used as the hash in seed splitting.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of the i-th independent stream: master XOR hash(i).
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return master ^ splitmix64(index);
}

/// Two-level split, e.g. (experiment stream, sample index).
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return derive_seed(derive_seed(master, stream), index);
}

inline double standard_normal(Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

inline Complex complex_normal(Rng& rng) {
  const double re = standard_normal(rng);
  const double im = standard_normal(rng);
  return {re, im};
}

}  // namespace entdyn

#endif  // ENTDYN_RANDOM_HPP
