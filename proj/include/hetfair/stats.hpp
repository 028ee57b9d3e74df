// Copyright 2026 The hetfair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small summary statistics used by the experiment runner.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "hetfair/random.hpp"

namespace hetfair::stats {

inline double mean(std::span<const double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
inline double stddev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

/// Half-width of the normal-approximation 95% confidence interval of the
/// mean.
inline double ci95(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  return 1.96 * stddev(v) / std::sqrt(static_cast<double>(v.size()));
}

/// Linear-interpolation quantile of an already sorted sample.
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - w) + sorted[hi] * w;
}

struct BootstrapInterval {
  double mean_diff = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Percentile bootstrap of mean(a - b) over paired samples.
inline BootstrapInterval paired_bootstrap(std::span<const double> a,
                                          std::span<const double> b,
                                          std::uint64_t seed,
                                          std::size_t resamples = 10000,
                                          double level = 0.95) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("paired_bootstrap: need equal, non-empty samples");
  }
  std::vector<double> d(a.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = a[k] - b[k];
  Rng rng(seed);
  std::vector<double> means(resamples);
  for (auto& m : means) {
    double s = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      s += d[uniform_index(rng, d.size())];
    }
    m = s / static_cast<double>(d.size());
  }
  std::sort(means.begin(), means.end());
  const double tail = (1.0 - level) / 2.0;
  return {mean(d), quantile_sorted(means, tail),
          quantile_sorted(means, 1.0 - tail)};
}

}  // namespace hetfair::stats
