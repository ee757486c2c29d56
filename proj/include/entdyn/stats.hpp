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

#ifndef ENTDYN_STATS_HPP
#define ENTDYN_STATS_HPP

#include <cmath>
#include <span>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "entdyn/common.hpp"

namespace entdyn::stats {

struct MeanEstimate {
  double mean = 0.0;
  double stddev = 0.0;     // sample standard deviation (n-1)
  double std_error = 0.0;  // stddev / sqrt(n)
  std::size_t count = 0;
};

inline MeanEstimate estimate_mean(std::span<const double> xs) {
  MeanEstimate e;
  e.count = xs.size();
  if (xs.empty()) return e;
  double sum = 0.0;
  for (double x : xs) sum += x;
  e.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - e.mean) * (x - e.mean);
    e.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    e.std_error = e.stddev / std::sqrt(static_cast<double>(xs.size()));
  }
  return e;
}

inline MeanEstimate estimate_mean(const std::vector<double>& xs) { return estimate_mean(std::span<const double>(xs)); }

/// Ordinary least squares y = intercept + slope x with a two-sided
/// confidence interval on the slope from Student's t.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_std_error = 0.0;
  double slope_ci_low = 0.0;
  double slope_ci_high = 0.0;
  double confidence = 0.95;
  std::size_t points = 0;
};

inline LinearFit fit_line(std::span<const double> x, std::span<const double> y, double confidence = 0.95) {
  require(x.size() == y.size(), "fit_line: size mismatch");
  require(x.size() >= 3, "fit_line: fewer than 3 sweep points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, "fit_line: sweep axis has no spread");
  LinearFit f;
  f.points = x.size();
  f.confidence = confidence;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    rss += r * r;
  }
  f.slope_std_error = std::sqrt(rss / (n - 2.0) / sxx);
  const boost::math::students_t dist(n - 2.0);
  const double t = boost::math::quantile(boost::math::complement(dist, (1.0 - confidence) / 2.0));
  f.slope_ci_low = f.slope - t * f.slope_std_error;
  f.slope_ci_high = f.slope + t * f.slope_std_error;
  return f;
}

inline double double_factorial(int n) {
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

}  // namespace entdyn::stats

#endif  // ENTDYN_STATS_HPP
