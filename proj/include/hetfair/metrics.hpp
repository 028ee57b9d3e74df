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

// Evaluation quantities for a solved association: HAF, sum-rate,
// proportional fairness, average latency and min-rate, overall and per
// fairness group.
//
// Rates are normalized (bit/s/Hz of the whole band) except sum_rate, which is
// reported in bit/s. Average latency is the mean inverse normalized rate,
// i.e. time per unit of data on a unit-bandwidth channel.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "hetfair/core.hpp"

namespace hetfair {

struct GroupStats {
  std::size_t users = 0;
  double haf = 0.0;
  /// bit/s.
  double sum_rate = 0.0;
  double pf = 0.0;
  double avg_latency = 0.0;
  /// Normalized rate. Zero for a group without users.
  double min_rate = 0.0;
  /// Normalized rate.
  double mean_rate = 0.0;

  bool operator==(const GroupStats&) const = default;
};

struct MetricsReport {
  GroupStats overall;
  std::array<GroupStats, kNumGroups> by_group{};
  std::vector<double> per_user_rates;

  double haf_total() const { return overall.haf; }

  bool operator==(const MetricsReport&) const = default;
};

/// Normalized rate r_i = sum_j gamma_ij x_ij y_ij of every user.
inline std::vector<double> user_rates(const NetworkInstance& inst,
                                      const Association& x,
                                      const Allocation& y) {
  detail::check_dims(inst, x, y);
  std::vector<double> r(inst.num_users());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = user_rate(inst, x, y, i);
  return r;
}

namespace detail {

inline GroupStats group_stats(const NetworkInstance& inst,
                              const std::vector<double>& rates,
                              const std::vector<std::size_t>& users) {
  GroupStats g;
  g.users = users.size();
  if (users.empty()) return g;
  double rate_sum = 0.0;
  double inv_sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i : users) {
    const double r = rates[i];
    const double rf = std::max(r, kRateFloor);
    g.haf += floored_utility(r, inst.alpha(i));
    rate_sum += r;
    g.pf += std::log(rf);
    inv_sum += 1.0 / rf;
    lo = std::min(lo, r);
  }
  const double n = static_cast<double>(users.size());
  g.sum_rate = rate_sum * inst.bandwidth_hz();
  g.mean_rate = rate_sum / n;
  g.avg_latency = inv_sum / n;
  g.min_rate = lo;
  return g;
}

}  // namespace detail

inline MetricsReport report(const NetworkInstance& inst, const Association& x,
                            const Allocation& y) {
  MetricsReport out;
  out.per_user_rates = user_rates(inst, x, y);
  std::vector<std::size_t> all(inst.num_users());
  std::array<std::vector<std::size_t>, kNumGroups> members;
  for (std::size_t i = 0; i < all.size(); ++i) {
    all[i] = i;
    members[index_of(inst.group(i))].push_back(i);
  }
  out.overall = detail::group_stats(inst, out.per_user_rates, all);
  for (std::size_t g = 0; g < kNumGroups; ++g) {
    out.by_group[g] = detail::group_stats(inst, out.per_user_rates, members[g]);
  }
  return out;
}

}  // namespace hetfair
