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

// Distributed pricing solver for joint user association and bandwidth
// allocation under heterogeneous alpha-fairness.
//
// Each BS j broadcasts a price mu_j. Users pick argmax_j gamma_ij / mu_j;
// each BS then allocates its band optimally (see ra.hpp) and moves its price
// along the subgradient of the dual function
//   g(mu) = sum_j mu_j
//         + sum_i max_j alpha_i / (1 - alpha_i) * gamma_hat_ij
//                       * mu_j^{(alpha_i - 1) / alpha_i},
// which upper-bounds the HAF of every feasible association.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hetfair/core.hpp"
#include "hetfair/ra.hpp"

namespace hetfair {

enum class StepSchedule { kConstant, kDiminishing };

struct PricingConfig {
  std::size_t total_iters = 500;
  /// Step size; with kDiminishing the step at iteration t is eta0 / sqrt(t).
  double eta0 = 0.3;
  StepSchedule schedule = StepSchedule::kDiminishing;
  double mu_init = 1.0;
  double mu_min = 1e-8;

  double step_at(std::size_t t) const {
    return schedule == StepSchedule::kConstant
               ? eta0
               : eta0 / std::sqrt(static_cast<double>(t));
  }

  void validate() const {
    if (total_iters < 1) {
      throw std::invalid_argument("PricingConfig: total_iters must be >= 1");
    }
    if (!(eta0 > 0.0)) throw std::invalid_argument("PricingConfig: eta0 <= 0");
    if (!(mu_min > 0.0) || !(mu_init >= mu_min)) {
      throw std::invalid_argument(
          "PricingConfig: need 0 < mu_min <= mu_init");
    }
  }

  bool operator==(const PricingConfig&) const = default;
};

struct IterationRecord {
  std::size_t iter = 0;  // 1-based
  double primal_haf = 0.0;
  /// g(mu_t); only the proposed solver has a dual.
  std::optional<double> dual_value;
  PriceVector mu;
  /// Users whose BS changed relative to the previous iterate.
  std::size_t assoc_changes = 0;
  /// Euclidean norm of the price-update direction at this iterate.
  double direction_norm = 0.0;
};

/// Runtime optimality certificate of a completed proposed run.
struct GapCertificate {
  /// Suboptimality bound evaluated at (lambda_star, lambda_hat).
  double theorem2_bound = 0.0;
  /// Best dual value minus best primal HAF.
  double empirical_gap = 0.0;
  /// Prices at the iterate with the smallest dual value.
  PriceVector lambda_star;
  /// RA multipliers of the association chosen at lambda_star.
  std::vector<std::optional<double>> lambda_hat;
};

struct RunTrace {
  std::vector<IterationRecord> iterations;
  std::optional<GapCertificate> certificate;
  /// Prices after the last update, for warm starts.
  PriceVector final_mu;
  /// Index into `iterations` of the returned (best primal) iterate.
  std::size_t best_primal_index = 0;

  double best_primal() const {
    return iterations.empty() ? -std::numeric_limits<double>::infinity()
                              : iterations[best_primal_index].primal_haf;
  }
  std::optional<double> best_dual() const {
    std::optional<double> best;
    for (const auto& r : iterations) {
      if (r.dual_value && (!best || *r.dual_value < *best)) best = r.dual_value;
    }
    return best;
  }
  /// Largest direction norm over the run.
  double max_direction_norm() const {
    double g = 0.0;
    for (const auto& r : iterations) g = std::max(g, r.direction_norm);
    return g;
  }
};

struct PricingResult {
  Association association;
  Allocation allocation;
  double haf = 0.0;
  RunTrace trace;
};

/// Each user picks argmax_j gamma_ij / mu_j; ties go to the lowest index.
inline Association associate(const NetworkInstance& inst,
                             const PriceVector& mu) {
  if (mu.size() != inst.num_bs()) {
    throw std::invalid_argument("associate: price vector has wrong size");
  }
  Association x{std::vector<std::size_t>(inst.num_users(), 0)};
  for (std::size_t i = 0; i < inst.num_users(); ++i) {
    std::size_t best = 0;
    double best_score = inst.gamma(i, 0) / mu[0];
    for (std::size_t j = 1; j < inst.num_bs(); ++j) {
      const double score = inst.gamma(i, j) / mu[j];
      if (score > best_score) {
        best = j;
        best_score = score;
      }
    }
    x.bs_of_user[i] = best;
  }
  return x;
}

/// Subgradient of g at mu for the association chosen at mu:
/// 1 - sum_{i in I_j} gamma_hat_ij mu_j^{-1/alpha_i}.
inline std::vector<double> subgradient(const NetworkInstance& inst,
                                       const Association& x,
                                       const PriceVector& mu) {
  x.validate(inst);
  std::vector<double> g(inst.num_bs(), 1.0);
  for (std::size_t i = 0; i < inst.num_users(); ++i) {
    const std::size_t j = x[i];
    g[j] -= inst.gamma_hat(i, j) * std::pow(mu[j], -1.0 / inst.alpha(i));
  }
  return g;
}

/// Projected subgradient step, floored at mu_min.
inline PriceVector price_step(const NetworkInstance& inst,
                              const Association& x, const PriceVector& mu,
                              double eta, double mu_min = 1e-8) {
  const auto g = subgradient(inst, x, mu);
  PriceVector next = mu;
  for (std::size_t j = 0; j < g.size(); ++j) {
    next.mu[j] = std::max(mu_min, mu[j] - eta * g[j]);
  }
  return next;
}

/// Per-user dual term for BS j, including the alpha == 1 limit
/// ln(gamma_ij) - ln(mu_j) - 1.
inline double dual_term(const NetworkInstance& inst, std::size_t i,
                        std::size_t j, double mu_j) {
  const double a = inst.alpha(i);
  if (a == 1.0) return std::log(inst.gamma(i, j)) - std::log(mu_j) - 1.0;
  return a / (1.0 - a) * inst.gamma_hat(i, j) * std::pow(mu_j, (a - 1.0) / a);
}

inline double dual_value(const NetworkInstance& inst, const PriceVector& mu) {
  if (mu.size() != inst.num_bs()) {
    throw std::invalid_argument("dual_value: price vector has wrong size");
  }
  double total = 0.0;
  for (double m : mu.mu) total += m;
  for (std::size_t i = 0; i < inst.num_users(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < inst.num_bs(); ++j) {
      best = std::max(best, dual_term(inst, i, j, mu[j]));
    }
    total += best;
  }
  return total;
}

/// Upper bound on the HAF lost by using the RA multipliers `lambda_hat` of
/// association `x` instead of the dual-optimal prices `lambda_star`:
///   sum_j (lambda*_j - lambda^_j)
///   + sum_{i,j} alpha_i gamma_hat_ij x_ij / (1 - alpha_i)
///               * (lambda*_j^{(alpha_i-1)/alpha_i} - lambda^_j^{(alpha_i-1)/alpha_i}).
/// A BS without users has no multiplier and counts as lambda^_j = 0.
inline double theorem2_bound(
    const NetworkInstance& inst, const Association& x,
    const PriceVector& lambda_star,
    const std::vector<std::optional<double>>& lambda_hat) {
  x.validate(inst);
  if (lambda_star.size() != inst.num_bs() ||
      lambda_hat.size() != inst.num_bs()) {
    throw std::invalid_argument("theorem2_bound: multiplier size mismatch");
  }
  double bound = 0.0;
  for (std::size_t j = 0; j < inst.num_bs(); ++j) {
    bound += lambda_star[j] - lambda_hat[j].value_or(0.0);
  }
  for (std::size_t i = 0; i < inst.num_users(); ++i) {
    const std::size_t j = x[i];
    if (!lambda_hat[j]) {
      throw std::invalid_argument(
          "theorem2_bound: served BS has no RA multiplier");
    }
    const double a = inst.alpha(i);
    const double ls = lambda_star[j];
    const double lh = *lambda_hat[j];
    if (a == 1.0) {
      bound += std::log(lh) - std::log(ls);
    } else {
      const double e = (a - 1.0) / a;
      bound += a * inst.gamma_hat(i, j) / (1.0 - a) *
               (std::pow(ls, e) - std::pow(lh, e));
    }
  }
  return bound;
}

namespace detail {

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double e : v) s += e * e;
  return std::sqrt(s);
}

inline PriceVector clamp_prices(PriceVector mu, double mu_min) {
  for (double& m : mu.mu) m = std::max(m, mu_min);
  return mu;
}

/// Two-stage loop shared by the proposed solver and the pricing baselines.
/// `decide(mu)` returns the users' association, `direction(x, mu)` the
/// vector d with mu' = max(mu_min, mu - eta d), and `dual(mu)` an optional
/// dual value. The best-primal iterate is returned.
template <typename Decide, typename Direction, typename Dual>
PricingResult run_price_loop(const NetworkInstance& inst,
                             const PricingConfig& cfg,
                             const LambdaSearchConfig& ra, PriceVector mu,
                             Decide&& decide, Direction&& direction,
                             Dual&& dual, bool with_certificate) {
  cfg.validate();
  if (mu.size() != inst.num_bs()) {
    throw std::invalid_argument("initial prices have wrong size");
  }
  mu = clamp_prices(std::move(mu), cfg.mu_min);

  PricingResult result;
  RunTrace& trace = result.trace;
  trace.iterations.reserve(cfg.total_iters);

  Association x = decide(mu);
  Association previous = x;
  double best_primal = -std::numeric_limits<double>::infinity();
  double best_dual = std::numeric_limits<double>::infinity();
  Association best_dual_assoc;
  Allocation best_dual_alloc;
  std::size_t best_dual_index = 0;

  for (std::size_t t = 1; t <= cfg.total_iters; ++t) {
    Allocation y = allocate(inst, x, ra);
    const double primal = haf_objective(inst, x, y);
    const std::optional<double> dv = dual(mu);
    const std::vector<double> d = direction(x, mu);

    IterationRecord rec;
    rec.iter = t;
    rec.primal_haf = primal;
    rec.dual_value = dv;
    rec.mu = mu;
    rec.assoc_changes = hamming(x, previous);
    rec.direction_norm = norm2(d);
    trace.iterations.push_back(std::move(rec));

    if (primal > best_primal) {
      best_primal = primal;
      trace.best_primal_index = t - 1;
      result.association = x;
      result.allocation = y;
    }
    if (with_certificate && dv && *dv < best_dual) {
      best_dual = *dv;
      best_dual_index = t - 1;
      best_dual_assoc = x;
      best_dual_alloc = std::move(y);
    }

    const double eta = cfg.step_at(t);
    for (std::size_t j = 0; j < mu.size(); ++j) {
      mu.mu[j] = std::max(cfg.mu_min, mu[j] - eta * d[j]);
      if (!std::isfinite(mu.mu[j])) {
        throw std::runtime_error("price update produced a non-finite price");
      }
    }
    previous = std::move(x);
    x = decide(mu);
  }

  trace.final_mu = mu;
  result.haf = best_primal;

  if (with_certificate && !trace.iterations.empty()) {
    GapCertificate cert;
    cert.lambda_star = trace.iterations[best_dual_index].mu;
    cert.lambda_hat = best_dual_alloc.lambda;
    cert.theorem2_bound = theorem2_bound(inst, best_dual_assoc,
                                         cert.lambda_star, cert.lambda_hat);
    cert.empirical_gap = best_dual - best_primal;
    trace.certificate = std::move(cert);
  }
  return result;
}

}  // namespace detail

/// Runs the proposed pricing algorithm for cfg.total_iters iterations.
/// Prices start at cfg.mu_init unless `warm_start` is given. Returns the
/// iterate with the best primal HAF together with the full trace and a gap
/// certificate taken at the best dual iterate.
inline PricingResult solve(const NetworkInstance& inst,
                           const PricingConfig& cfg = {},
                           const LambdaSearchConfig& ra = {},
                           std::optional<PriceVector> warm_start = {}) {
  PriceVector mu = warm_start ? std::move(*warm_start)
                              : PriceVector::uniform(inst.num_bs(), cfg.mu_init);
  return detail::run_price_loop(
      inst, cfg, ra, std::move(mu),
      [&](const PriceVector& m) { return associate(inst, m); },
      [&](const Association& x, const PriceVector& m) {
        return subgradient(inst, x, m);
      },
      [&](const PriceVector& m) -> std::optional<double> {
        return dual_value(inst, m);
      },
      /*with_certificate=*/true);
}

/// Checks min_t g(mu_t) - g(mu*) <= G ||mu_1 - mu*||^2 / sqrt(T) + tol for
/// a completed proposed trace, with `mu_star` standing in for the dual
/// optimum.
inline bool theorem1_check(const RunTrace& trace, const PriceVector& mu_star,
                           double dual_at_mu_star, double G,
                           double tol = 1e-6) {
  if (trace.iterations.empty()) return true;
  const auto min_dual = trace.best_dual();
  if (!min_dual) throw std::invalid_argument("theorem1_check: trace has no dual");
  const PriceVector& mu1 = trace.iterations.front().mu;
  if (mu1.size() != mu_star.size()) {
    throw std::invalid_argument("theorem1_check: price size mismatch");
  }
  double r2 = 0.0;
  for (std::size_t j = 0; j < mu1.size(); ++j) {
    r2 += (mu1[j] - mu_star[j]) * (mu1[j] - mu_star[j]);
  }
  const double T = static_cast<double>(trace.iterations.size());
  return *min_dual - dual_at_mu_star <= G * r2 / std::sqrt(T) + tol;
}

struct EnvelopeReport {
  PriceVector mu_star_proxy;
  double proxy_dual = 0.0;
  double min_dual = 0.0;
  double G = 0.0;
  double radius = 0.0;
  double eta = 0.0;
  std::size_t T = 0;
  double envelope = 0.0;
  bool holds = false;
};

/// Two-pass convergence check. Pass one runs `cfg` as given and yields a
/// proxy mu* (the best dual iterate) and G (the largest subgradient norm).
/// Pass two reruns from the same start with the constant step
/// ||mu_1 - mu*|| / (G sqrt(T)), and its trace is checked against the
/// convergence envelope. G covers the subgradients of both passes.
inline EnvelopeReport calibrated_envelope(const NetworkInstance& inst,
                                          const PricingConfig& cfg = {},
                                          const LambdaSearchConfig& ra = {},
                                          double tol = 1e-6) {
  const PricingResult first = solve(inst, cfg, ra);
  const RunTrace& t1 = first.trace;

  EnvelopeReport rep;
  rep.T = cfg.total_iters;
  rep.mu_star_proxy = t1.certificate->lambda_star;
  rep.proxy_dual = dual_value(inst, rep.mu_star_proxy);
  const PriceVector& mu1 = t1.iterations.front().mu;
  double r2 = 0.0;
  for (std::size_t j = 0; j < mu1.size(); ++j) {
    r2 += (mu1[j] - rep.mu_star_proxy[j]) * (mu1[j] - rep.mu_star_proxy[j]);
  }
  rep.radius = std::sqrt(r2);
  const double g1 = t1.max_direction_norm();
  rep.eta = g1 > 0.0 ? rep.radius / (g1 * std::sqrt(static_cast<double>(rep.T)))
                     : 0.0;

  const RunTrace* checked = &t1;
  PricingResult second;
  if (rep.eta > 0.0) {
    PricingConfig calibrated = cfg;
    calibrated.schedule = StepSchedule::kConstant;
    calibrated.eta0 = rep.eta;
    second = solve(inst, calibrated, ra);
    checked = &second.trace;
  }
  rep.G = std::max(g1, checked->max_direction_norm());
  rep.min_dual = *checked->best_dual();
  rep.envelope = rep.G * r2 / std::sqrt(static_cast<double>(rep.T));
  rep.holds =
      theorem1_check(*checked, rep.mu_star_proxy, rep.proxy_dual, rep.G, tol);
  return rep;
}

}  // namespace hetfair
