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

// Per-BS bandwidth allocation for a fixed association.
//
// For the users I_j served by BS j the optimal fractions are
//   y_ij = gamma_hat_ij * lambda_j^{-1/alpha_i},
// where lambda_j > 0 is the unique root of
//   sum_{i in I_j} gamma_hat_ij * lambda^{-1/alpha_i} = 1.
// The left-hand side is continuous and strictly decreasing in lambda, going
// to +inf at 0+ and to 0 at +inf, so the root always exists and is unique.

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hetfair/core.hpp"

namespace hetfair {

enum class LambdaMethod { kBisection, kDigitSearch };

struct LambdaSearchConfig {
  // Digit search.
  double initial_step = 1e3;
  std::size_t outer_iters = 12;
  std::size_t inner_iters = 10;
  // Bisection: stop once (hi - lo) <= bisect_tol * hi.
  double bisect_tol = 1e-10;
  LambdaMethod method = LambdaMethod::kBisection;

  void validate() const {
    if (!(initial_step > 0.0) || outer_iters == 0 || inner_iters == 0 ||
        !(bisect_tol > 0.0)) {
      throw std::invalid_argument("LambdaSearchConfig: fields must be > 0");
    }
  }

  bool operator==(const LambdaSearchConfig&) const = default;
};

class EmptyBsError : public std::runtime_error {
 public:
  explicit EmptyBsError(std::size_t bs)
      : std::runtime_error("BS " + std::to_string(bs) + " has no users"),
        bs_(bs) {}
  std::size_t bs() const { return bs_; }

 private:
  std::size_t bs_;
};

/// One served user's contribution to the KKT condition.
struct KktTerm {
  double gamma_hat;
  double alpha;
};

inline std::vector<KktTerm> kkt_terms(const NetworkInstance& inst,
                                      std::span<const std::size_t> users,
                                      std::size_t j) {
  std::vector<KktTerm> terms;
  terms.reserve(users.size());
  for (std::size_t i : users) {
    terms.push_back({inst.gamma_hat(i, j), inst.alpha(i)});
  }
  return terms;
}

inline std::vector<KktTerm> kkt_terms(const NetworkInstance& inst,
                                      const Association& x, std::size_t j) {
  const auto users = x.users_of(j);
  return kkt_terms(inst, users, j);
}

/// sum_i gamma_hat_i * lam^{-1/alpha_i}, the bandwidth the BS would hand out
/// at multiplier `lam`.
inline double kkt_load(std::span<const KktTerm> terms, double lam) {
  double s = 0.0;
  for (const auto& t : terms) s += t.gamma_hat * std::pow(lam, -1.0 / t.alpha);
  return s;
}

inline double kkt_residual(std::span<const KktTerm> terms, double lam) {
  if (!(lam > 0.0)) throw std::domain_error("kkt_residual: lambda must be > 0");
  return kkt_load(terms, lam) - 1.0;
}

inline double kkt_residual(const NetworkInstance& inst, const Association& x,
                           std::size_t j, double lam) {
  const auto terms = kkt_terms(inst, x, j);
  if (terms.empty()) throw EmptyBsError(j);
  return kkt_residual(terms, lam);
}

/// Fixed-schedule decimal digit search: grow lambda by `step`, and on
/// overshoot step back and divide the step by ten. A final increment is
/// applied once the schedule is exhausted.
inline double solve_lambda_digit(std::span<const KktTerm> terms,
                                 const LambdaSearchConfig& cfg) {
  if (terms.empty()) throw std::invalid_argument("solve_lambda_digit: no users");
  double step = cfg.initial_step;
  double lam = 0.0;
  for (std::size_t k = 0; k < cfg.outer_iters; ++k) {
    for (std::size_t l = 0; l < cfg.inner_iters; ++l) {
      lam += step;
      if (1.0 > kkt_load(terms, lam)) {
        lam -= step;
        step /= 10.0;
      }
    }
  }
  lam += step;
  return lam;
}

/// Brackets the root by doubling/halving from 1, then bisects until the
/// bracket is narrower than `bisect_tol` relative.
inline double solve_lambda_bisect(std::span<const KktTerm> terms,
                                  const LambdaSearchConfig& cfg) {
  if (terms.empty()) {
    throw std::invalid_argument("solve_lambda_bisect: no users");
  }
  auto f = [&](double lam) { return kkt_load(terms, lam) - 1.0; };

  constexpr int kMaxBracketSteps = 2000;
  double lo = 1.0;
  double hi = 1.0;
  const double f1 = f(1.0);
  if (f1 == 0.0) return 1.0;
  if (f1 > 0.0) {
    int n = 0;
    while (f(hi) > 0.0) {
      lo = hi;
      hi *= 2.0;
      if (++n > kMaxBracketSteps || !std::isfinite(hi)) {
        throw std::runtime_error("solve_lambda_bisect: cannot bracket root");
      }
    }
  } else {
    int n = 0;
    while (f(lo) < 0.0) {
      hi = lo;
      lo *= 0.5;
      if (++n > kMaxBracketSteps || lo == 0.0) {
        throw std::runtime_error("solve_lambda_bisect: cannot bracket root");
      }
    }
  }

  for (int it = 0; it < 500 && hi - lo > cfg.bisect_tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (fm > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double solve_lambda(std::span<const KktTerm> terms,
                           const LambdaSearchConfig& cfg) {
  return cfg.method == LambdaMethod::kDigitSearch
             ? solve_lambda_digit(terms, cfg)
             : solve_lambda_bisect(terms, cfg);
}

inline double solve_lambda_digit(const NetworkInstance& inst,
                                 const Association& x, std::size_t j,
                                 const LambdaSearchConfig& cfg = {}) {
  const auto terms = kkt_terms(inst, x, j);
  if (terms.empty()) throw EmptyBsError(j);
  return solve_lambda_digit(terms, cfg);
}

inline double solve_lambda_bisect(const NetworkInstance& inst,
                                  const Association& x, std::size_t j,
                                  const LambdaSearchConfig& cfg = {}) {
  const auto terms = kkt_terms(inst, x, j);
  if (terms.empty()) throw EmptyBsError(j);
  return solve_lambda_bisect(terms, cfg);
}

/// Sum of utilities of `users` when BS j splits its band optimally among
/// them. Zero for an empty set.
inline double served_utility(const NetworkInstance& inst,
                             std::span<const std::size_t> users, std::size_t j,
                             const LambdaSearchConfig& cfg = {}) {
  if (users.empty()) return 0.0;
  const auto terms = kkt_terms(inst, users, j);
  const double lam = solve_lambda(terms, cfg);
  double total = 0.0;
  for (std::size_t k = 0; k < users.size(); ++k) {
    const std::size_t i = users[k];
    const double y = terms[k].gamma_hat * std::pow(lam, -1.0 / terms[k].alpha);
    total += floored_utility(inst.gamma(i, j) * y, terms[k].alpha);
  }
  return total;
}

/// Optimal bandwidth split for association `x`. Empty BSs get a zero column
/// and no multiplier.
inline Allocation allocate(const NetworkInstance& inst, const Association& x,
                           const LambdaSearchConfig& cfg = {}) {
  x.validate(inst);
  const std::size_t num_bs = inst.num_bs();
  Allocation out{Matrix<double>(inst.num_users(), num_bs),
                 std::vector<std::optional<double>>(num_bs)};

  std::vector<std::vector<std::size_t>> members(num_bs);
  for (std::size_t i = 0; i < x.size(); ++i) members[x[i]].push_back(i);

  for (std::size_t j = 0; j < num_bs; ++j) {
    if (members[j].empty()) continue;
    const auto terms = kkt_terms(inst, members[j], j);
    const double lam = solve_lambda(terms, cfg);
    out.lambda[j] = lam;
    for (std::size_t k = 0; k < members[j].size(); ++k) {
      out.y(members[j][k], j) =
          terms[k].gamma_hat * std::pow(lam, -1.0 / terms[k].alpha);
    }
  }
  return out;
}

}  // namespace hetfair
