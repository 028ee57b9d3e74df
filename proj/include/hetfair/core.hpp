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

// Domain types shared by every module, the alpha-fair utility, and the
// heterogeneous alpha-fairness (HAF) objective.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hetfair/matrix.hpp"

namespace hetfair {

/// Spectral efficiencies below this value are clamped, so gamma_hat stays
/// finite for alpha > 1.
inline constexpr double kGammaMin = 1e-6;

/// Normalized rate used in place of zero when evaluating utilities.
inline constexpr double kRateFloor = 1e-9;

enum class Group : std::uint8_t { A1 = 0, A2 = 1, A3 = 2, A4 = 3 };

inline constexpr std::array<Group, 4> kGroups = {Group::A1, Group::A2,
                                                 Group::A3, Group::A4};
inline constexpr std::size_t kNumGroups = kGroups.size();

/// One value per user group, indexed by static_cast<size_t>(Group).
using GroupValues = std::array<double, kNumGroups>;

inline std::string_view to_string(Group g) {
  switch (g) {
    case Group::A1: return "A1";
    case Group::A2: return "A2";
    case Group::A3: return "A3";
    case Group::A4: return "A4";
  }
  return "?";
}

inline std::size_t index_of(Group g) { return static_cast<std::size_t>(g); }

struct AlphaInterval {
  double lo;
  double hi;
  bool contains(double a) const { return a >= lo && a <= hi; }
};

/// Sampling interval of each fairness class, from throughput-centric (A1)
/// to strongly fairness-sensitive (A4).
inline constexpr AlphaInterval interval_of(Group g) {
  constexpr std::array<AlphaInterval, kNumGroups> kIntervals = {
      AlphaInterval{0.4, 0.6}, AlphaInterval{0.7, 0.9},
      AlphaInterval{1.8, 2.2}, AlphaInterval{2.75, 3.25}};
  return kIntervals[static_cast<std::size_t>(g)];
}

/// Per-user fairness exponents with their class labels.
struct AlphaProfile {
  std::vector<double> alpha;
  std::vector<Group> group;

  std::size_t size() const { return alpha.size(); }

  /// Builds a profile where every user is in `g` with exponent `a`.
  static AlphaProfile uniform(std::size_t n, double a, Group g = Group::A1) {
    return AlphaProfile{std::vector<double>(n, a), std::vector<Group>(n, g)};
  }

  /// Checks alpha > 0 and matching lengths. When `strict_groups` is set,
  /// also checks every alpha lies inside its group's interval.
  void validate(bool strict_groups = false) const {
    if (alpha.size() != group.size()) {
      throw std::invalid_argument("AlphaProfile: alpha/group length mismatch");
    }
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (!(alpha[i] > 0.0) || !std::isfinite(alpha[i])) {
        throw std::invalid_argument("AlphaProfile: alpha must be positive");
      }
      if (strict_groups && !interval_of(group[i]).contains(alpha[i])) {
        throw std::invalid_argument(
            "AlphaProfile: alpha outside its group interval");
      }
    }
  }

  bool operator==(const AlphaProfile&) const = default;
};

/// Where an instance came from. Not used by any solver.
struct InstanceMeta {
  std::uint64_t master_seed = 0;
  std::uint64_t seed_index = 0;
  std::size_t slot = 0;
  std::string scenario;
};

/// One channel realization: spectral efficiencies plus the fairness profile.
/// Immutable after construction.
class NetworkInstance {
 public:
  NetworkInstance(Matrix<double> gamma, AlphaProfile alphas,
                  double bandwidth_hz = 20e6, InstanceMeta meta = {})
      : gamma_(std::move(gamma)),
        alphas_(std::move(alphas)),
        bandwidth_hz_(bandwidth_hz),
        meta_(std::move(meta)) {
    if (gamma_.rows() == 0 || gamma_.cols() == 0) {
      throw std::invalid_argument("NetworkInstance: empty gamma matrix");
    }
    if (alphas_.size() != gamma_.rows()) {
      throw std::invalid_argument(
          "NetworkInstance: alpha profile does not match number of users");
    }
    alphas_.validate();
    if (!(bandwidth_hz_ > 0.0)) {
      throw std::invalid_argument("NetworkInstance: bandwidth must be > 0");
    }
    gamma_hat_ = Matrix<double>(gamma_.rows(), gamma_.cols());
    for (std::size_t i = 0; i < gamma_.rows(); ++i) {
      const double a = alphas_.alpha[i];
      const double exponent = (1.0 - a) / a;
      for (std::size_t j = 0; j < gamma_.cols(); ++j) {
        double& g = gamma_(i, j);
        if (!std::isfinite(g)) {
          throw std::invalid_argument("NetworkInstance: non-finite gamma");
        }
        g = std::max(g, kGammaMin);
        gamma_hat_(i, j) = std::pow(g, exponent);
      }
    }
  }

  std::size_t num_users() const { return gamma_.rows(); }
  std::size_t num_bs() const { return gamma_.cols(); }

  double gamma(std::size_t i, std::size_t j) const { return gamma_(i, j); }
  /// gamma^{(1 - alpha_i) / alpha_i}, the fairness-adjusted efficiency.
  double gamma_hat(std::size_t i, std::size_t j) const {
    return gamma_hat_(i, j);
  }
  double alpha(std::size_t i) const { return alphas_.alpha[i]; }
  Group group(std::size_t i) const { return alphas_.group[i]; }

  const Matrix<double>& gamma_matrix() const { return gamma_; }
  const Matrix<double>& gamma_hat_matrix() const { return gamma_hat_; }
  const AlphaProfile& alphas() const { return alphas_; }
  double bandwidth_hz() const { return bandwidth_hz_; }
  const InstanceMeta& meta() const { return meta_; }

 private:
  Matrix<double> gamma_;
  Matrix<double> gamma_hat_;
  AlphaProfile alphas_;
  double bandwidth_hz_;
  InstanceMeta meta_;
};

/// User association: exactly one serving BS per user.
struct Association {
  std::vector<std::size_t> bs_of_user;

  std::size_t size() const { return bs_of_user.size(); }
  std::size_t operator[](std::size_t i) const { return bs_of_user[i]; }

  static Association all_on(std::size_t num_users, std::size_t bs) {
    return Association{std::vector<std::size_t>(num_users, bs)};
  }

  /// Users served by BS `j`, in increasing index order.
  std::vector<std::size_t> users_of(std::size_t j) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bs_of_user.size(); ++i) {
      if (bs_of_user[i] == j) out.push_back(i);
    }
    return out;
  }

  void validate(const NetworkInstance& inst) const {
    if (bs_of_user.size() != inst.num_users()) {
      throw std::invalid_argument("Association: wrong number of users");
    }
    for (std::size_t j : bs_of_user) {
      if (j >= inst.num_bs()) {
        throw std::invalid_argument("Association: BS index out of range");
      }
    }
  }

  bool operator==(const Association&) const = default;
};

/// Number of users whose serving BS differs between two associations.
inline std::size_t hamming(const Association& a, const Association& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i] != b[i]) ++n;
  }
  return n + (a.size() > b.size() ? a.size() - b.size() : b.size() - a.size());
}

/// Bandwidth fractions y (users x BSs) and the per-BS multipliers that
/// produced them. BSs without users carry no multiplier.
struct Allocation {
  Matrix<double> y;
  std::vector<std::optional<double>> lambda;
};

/// Dual prices broadcast by the base stations.
struct PriceVector {
  std::vector<double> mu;

  std::size_t size() const { return mu.size(); }
  double operator[](std::size_t j) const { return mu[j]; }

  static PriceVector uniform(std::size_t num_bs, double value) {
    return PriceVector{std::vector<double>(num_bs, value)};
  }

  bool operator==(const PriceVector&) const = default;
};

/// u(r) = r^{1-alpha} / (1-alpha), with the ln(r) limit at alpha == 1.
inline double alpha_utility(double rate, double alpha) {
  if (!(rate > 0.0)) {
    throw std::domain_error("alpha_utility: rate must be positive");
  }
  if (!(alpha > 0.0)) {
    throw std::domain_error("alpha_utility: alpha must be positive");
  }
  if (alpha == 1.0) return std::log(rate);
  return std::pow(rate, 1.0 - alpha) / (1.0 - alpha);
}

/// Utility with zero and tiny rates raised to kRateFloor.
inline double floored_utility(double rate, double alpha) {
  return alpha_utility(std::max(rate, kRateFloor), alpha);
}

namespace detail {

inline void check_dims(const NetworkInstance& inst, const Association& x,
                       const Allocation& y) {
  x.validate(inst);
  if (y.y.rows() != inst.num_users() || y.y.cols() != inst.num_bs()) {
    throw std::invalid_argument("Allocation: dimension mismatch");
  }
}

}  // namespace detail

/// Normalized rate of user i: sum_j gamma_ij x_ij y_ij.
inline double user_rate(const NetworkInstance& inst, const Association& x,
                        const Allocation& y, std::size_t i) {
  const std::size_t j = x[i];
  return inst.gamma(i, j) * y.y(i, j);
}

/// Sum of per-user alpha-fair utilities of the achieved rates.
inline double haf_objective(const NetworkInstance& inst, const Association& x,
                            const Allocation& y) {
  detail::check_dims(inst, x, y);
  double total = 0.0;
  for (std::size_t i = 0; i < inst.num_users(); ++i) {
    total += floored_utility(user_rate(inst, x, y, i), inst.alpha(i));
  }
  return total;
}

/// HAF split by user group. Groups without users contribute 0.
inline GroupValues groupwise_haf(const NetworkInstance& inst,
                                 const Association& x, const Allocation& y) {
  detail::check_dims(inst, x, y);
  GroupValues out{};
  for (std::size_t i = 0; i < inst.num_users(); ++i) {
    out[index_of(inst.group(i))] +=
        floored_utility(user_rate(inst, x, y, i), inst.alpha(i));
  }
  return out;
}

}  // namespace hetfair
