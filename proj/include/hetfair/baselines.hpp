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

// Comparison schemes. Every scheme only decides the association; the
// bandwidth split always comes from the optimal per-BS allocation under the
// users' true fairness exponents, so all methods are scored on the same
// objective.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "hetfair/core.hpp"
#include "hetfair/pricing.hpp"
#include "hetfair/ra.hpp"
#include "hetfair/random.hpp"

namespace hetfair {

struct GaParams {
  std::size_t population = 60;
  std::size_t parents = 10;
  double mutation_prob = 0.01;
  std::size_t max_generations = 300;

  void validate() const {
    if (parents < 2 || population < parents) {
      throw std::invalid_argument("GaParams: need population >= parents >= 2");
    }
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) {
      throw std::invalid_argument("GaParams: mutation_prob must be in [0, 1]");
    }
  }

  bool operator==(const GaParams&) const = default;
};

enum class BaselineKind {
  kRandom,
  kMaxSinr,
  kPF,
  kAlphaFair,
  kMinLatency,
  kTwoRs,
  kGenetic,
  kBruteForce,
};

/// Which way a Min-Latency user reads the decision value mu_j / sqrt(gamma).
enum class LatencyRule { kArgmax, kArgmin };

struct BaselineSpec {
  BaselineKind kind = BaselineKind::kMaxSinr;
  /// Homogeneous exponent assumed by kAlphaFair pricing.
  double alpha_fixed = 0.6;
  LatencyRule latency_rule = LatencyRule::kArgmax;
  PricingConfig pricing;
  GaParams ga;
  std::size_t two_rs_max_passes = 100;

  void validate() const {
    if (kind == BaselineKind::kAlphaFair &&
        (!(alpha_fixed > 0.0) || alpha_fixed == 1.0)) {
      throw std::invalid_argument("alpha_fixed must be > 0 and != 1");
    }
    pricing.validate();
    ga.validate();
  }
};

/// Association, its optimal allocation, and the resulting HAF.
struct Solution {
  Association association;
  Allocation allocation;
  double haf = 0.0;
};

inline Solution evaluate(const NetworkInstance& inst, Association x,
                         const LambdaSearchConfig& ra = {}) {
  Allocation y = allocate(inst, x, ra);
  const double haf = haf_objective(inst, x, y);
  return {std::move(x), std::move(y), haf};
}

/// Each user picks a BS uniformly at random.
inline Solution run_random(const NetworkInstance& inst, std::uint64_t seed,
                           const LambdaSearchConfig& ra = {}) {
  Rng rng(seed);
  Association x{std::vector<std::size_t>(inst.num_users())};
  for (auto& j : x.bs_of_user) j = uniform_index(rng, inst.num_bs());
  return evaluate(inst, std::move(x), ra);
}

inline Association max_sinr_association(const NetworkInstance& inst) {
  return associate(inst, PriceVector::uniform(inst.num_bs(), 1.0));
}

inline Solution run_max_sinr(const NetworkInstance& inst,
                             const LambdaSearchConfig& ra = {}) {
  return evaluate(inst, max_sinr_association(inst), ra);
}

namespace detail {

/// argmax_j score(i, j) per user, lowest index on ties.
template <typename Score>
Association argmax_association(const NetworkInstance& inst, Score&& score) {
  Association x{std::vector<std::size_t>(inst.num_users(), 0)};
  for (std::size_t i = 0; i < inst.num_users(); ++i) {
    std::size_t best = 0;
    double best_score = score(i, 0);
    for (std::size_t j = 1; j < inst.num_bs(); ++j) {
      const double s = score(i, j);
      if (s > best_score) {
        best = j;
        best_score = s;
      }
    }
    x.bs_of_user[i] = best;
  }
  return x;
}

}  // namespace detail

/// Runs one of the classic pricing schemes with its own decision function
/// f1 and price update f2:
///   PF:          f1 = mu_j gamma_ij,
///                f2 = mu_j - eta (e^{mu_j - 1} - |I_j|)
///   alpha-fair:  f1 = mu_j gamma_ij^{(1-a)/a} / (1 - a) (sign only),
///                f2 = mu_j - eta sgn(1-a) (sum gamma^{(1-a)/a}
///                                          - (|1-a|/a mu_j)^{1/(a-1)})
///   Min-Latency: f1 = mu_j / sqrt(gamma_ij),
///                f2 = mu_j - eta (mu_j / 2 + sum 1/sqrt(gamma_ij))
/// For a < 1 the alpha-fair row is the textbook form; for a > 1 the sign
/// factor keeps the update a descent step of the same dual.
inline PricingResult run_pricing_baseline(
    const NetworkInstance& inst, const BaselineSpec& spec,
    const LambdaSearchConfig& ra = {},
    std::optional<PriceVector> warm_start = {}) {
  spec.validate();
  const std::size_t num_bs = inst.num_bs();
  PriceVector mu = warm_start
                       ? std::move(*warm_start)
                       : PriceVector::uniform(num_bs, spec.pricing.mu_init);
  auto no_dual = [](const PriceVector&) { return std::optional<double>{}; };

  switch (spec.kind) {
    case BaselineKind::kPF:
      return detail::run_price_loop(
          inst, spec.pricing, ra, std::move(mu),
          [&](const PriceVector& m) {
            return detail::argmax_association(inst, [&](auto i, auto j) {
              return m[j] * inst.gamma(i, j);
            });
          },
          [&](const Association& x, const PriceVector& m) {
            std::vector<double> load(num_bs, 0.0);
            for (std::size_t i = 0; i < x.size(); ++i) load[x[i]] += 1.0;
            std::vector<double> d(num_bs);
            for (std::size_t j = 0; j < num_bs; ++j) {
              d[j] = std::exp(m[j] - 1.0) - load[j];
            }
            return d;
          },
          no_dual, false);

    case BaselineKind::kAlphaFair: {
      const double a = spec.alpha_fixed;
      const double e = (1.0 - a) / a;
      const double sign = a < 1.0 ? 1.0 : -1.0;
      const double c = std::abs(1.0 - a) / a;
      const double p = 1.0 / (a - 1.0);
      return detail::run_price_loop(
          inst, spec.pricing, ra, std::move(mu),
          [&](const PriceVector& m) {
            return detail::argmax_association(inst, [&](auto i, auto j) {
              return sign * m[j] * std::pow(inst.gamma(i, j), e);
            });
          },
          [&](const Association& x, const PriceVector& m) {
            std::vector<double> load(num_bs, 0.0);
            for (std::size_t i = 0; i < x.size(); ++i) {
              load[x[i]] += std::pow(inst.gamma(i, x[i]), e);
            }
            std::vector<double> d(num_bs);
            for (std::size_t j = 0; j < num_bs; ++j) {
              d[j] = sign * (load[j] - std::pow(c * m[j], p));
            }
            return d;
          },
          no_dual, false);
    }

    case BaselineKind::kMinLatency: {
      const double sign =
          spec.latency_rule == LatencyRule::kArgmax ? 1.0 : -1.0;
      return detail::run_price_loop(
          inst, spec.pricing, ra, std::move(mu),
          [&](const PriceVector& m) {
            return detail::argmax_association(inst, [&](auto i, auto j) {
              return sign * m[j] / std::sqrt(inst.gamma(i, j));
            });
          },
          [&](const Association& x, const PriceVector& m) {
            std::vector<double> d(num_bs);
            for (std::size_t j = 0; j < num_bs; ++j) d[j] = 0.5 * m[j];
            for (std::size_t i = 0; i < x.size(); ++i) {
              d[x[i]] += 1.0 / std::sqrt(inst.gamma(i, x[i]));
            }
            return d;
          },
          no_dual, false);
    }

    default:
      throw std::invalid_argument(
          "run_pricing_baseline: kind is not a pricing scheme");
  }
}

/// Local search over single-user moves (the association matrices within
/// L0 distance 2 of the current one). Accepts the first improving move it
/// finds and keeps scanning; stops after a pass with no improvement or after
/// `max_passes` passes. In adaptive mode it returns right after the first
/// accepted move.
inline Solution run_2rs(const NetworkInstance& inst, Association start,
                        std::size_t max_passes, bool adaptive,
                        const LambdaSearchConfig& ra = {}) {
  start.validate(inst);
  const std::size_t num_bs = inst.num_bs();
  std::vector<std::vector<std::size_t>> members(num_bs);
  for (std::size_t i = 0; i < start.size(); ++i) members[start[i]].push_back(i);
  std::vector<double> util(num_bs);
  for (std::size_t j = 0; j < num_bs; ++j) {
    util[j] = served_utility(inst, members[j], j, ra);
  }

  Association x = std::move(start);
  bool moved_once = false;
  for (std::size_t pass = 0; pass < max_passes && !moved_once; ++pass) {
    bool improved = false;
    for (std::size_t i = 0; i < inst.num_users(); ++i) {
      const std::size_t from = x[i];
      std::vector<std::size_t> from_without;
      from_without.reserve(members[from].size());
      for (std::size_t u : members[from]) {
        if (u != i) from_without.push_back(u);
      }
      const double from_util = served_utility(inst, from_without, from, ra);
      for (std::size_t to = 0; to < num_bs; ++to) {
        if (to == from) continue;
        std::vector<std::size_t> to_with = members[to];
        to_with.insert(std::upper_bound(to_with.begin(), to_with.end(), i), i);
        const double to_util = served_utility(inst, to_with, to, ra);
        const double delta = (from_util + to_util) - (util[from] + util[to]);
        const double scale =
            1.0 + std::abs(util[from]) + std::abs(util[to]);
        if (delta > 1e-12 * scale) {
          members[from] = std::move(from_without);
          members[to] = std::move(to_with);
          util[from] = from_util;
          util[to] = to_util;
          x.bs_of_user[i] = to;
          improved = true;
          break;
        }
      }
      if (improved && adaptive) {
        moved_once = true;
        break;
      }
    }
    if (!improved) break;
  }
  return evaluate(inst, std::move(x), ra);
}

/// Genetic search over associations: elitist selection of `parents`,
/// uniform crossover, per-gene mutation to a uniformly random BS. Returns
/// the best association ever evaluated.
inline Solution run_ga(const NetworkInstance& inst, const GaParams& params,
                       std::uint64_t seed, const LambdaSearchConfig& ra = {}) {
  params.validate();
  Rng rng(seed);
  const std::size_t num_users = inst.num_users();
  const std::size_t num_bs = inst.num_bs();

  struct Individual {
    Association x;
    double fitness;
  };
  auto fitness = [&](const Association& x) {
    return haf_objective(inst, x, allocate(inst, x, ra));
  };

  std::vector<Individual> pop;
  pop.reserve(params.population);
  for (std::size_t k = 0; k < params.population; ++k) {
    Association x{std::vector<std::size_t>(num_users)};
    for (auto& j : x.bs_of_user) j = uniform_index(rng, num_bs);
    const double f = fitness(x);
    pop.push_back({std::move(x), f});
  }
  auto by_fitness = [](const Individual& a, const Individual& b) {
    return a.fitness > b.fitness;
  };
  std::stable_sort(pop.begin(), pop.end(), by_fitness);
  Individual best = pop.front();

  for (std::size_t gen = 0; gen < params.max_generations; ++gen) {
    std::vector<Individual> next(pop.begin(), pop.begin() + params.parents);
    while (next.size() < params.population) {
      const std::size_t pa = uniform_index(rng, params.parents);
      std::size_t pb = uniform_index(rng, params.parents - 1);
      if (pb >= pa) ++pb;
      Association child{std::vector<std::size_t>(num_users)};
      for (std::size_t i = 0; i < num_users; ++i) {
        const bool from_a = (rng() & 1ULL) != 0;
        child.bs_of_user[i] = from_a ? pop[pa].x[i] : pop[pb].x[i];
        if (uniform01(rng) < params.mutation_prob) {
          child.bs_of_user[i] = uniform_index(rng, num_bs);
        }
      }
      const double f = fitness(child);
      next.push_back({std::move(child), f});
    }
    std::stable_sort(next.begin(), next.end(), by_fitness);
    pop = std::move(next);
    if (pop.front().fitness > best.fitness) best = pop.front();
  }
  return evaluate(inst, std::move(best.x), ra);
}

/// Largest search space brute_force accepts.
inline constexpr std::uint64_t kBruteForceLimit = 1'000'000;

/// Exhaustive search over all J^I associations with high-precision RA.
/// Ties keep the lexicographically first association.
inline Solution brute_force(const NetworkInstance& inst,
                            LambdaSearchConfig ra = {}) {
  const std::size_t num_users = inst.num_users();
  const std::size_t num_bs = inst.num_bs();
  std::uint64_t space = 1;
  for (std::size_t i = 0; i < num_users; ++i) {
    space *= num_bs;
    if (space > kBruteForceLimit) {
      throw std::length_error("brute_force: J^I exceeds " +
                              std::to_string(kBruteForceLimit));
    }
  }
  ra.method = LambdaMethod::kBisection;
  ra.bisect_tol = std::min(ra.bisect_tol, 1e-12);

  Association x{std::vector<std::size_t>(num_users, 0)};
  Solution best;
  best.haf = -std::numeric_limits<double>::infinity();
  for (std::uint64_t n = 0; n < space; ++n) {
    Solution s = evaluate(inst, x, ra);
    if (s.haf > best.haf) best = std::move(s);
    for (std::size_t i = num_users; i-- > 0;) {
      if (++x.bs_of_user[i] < num_bs) break;
      x.bs_of_user[i] = 0;
    }
  }
  return best;
}

}  // namespace hetfair
