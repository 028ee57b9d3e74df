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

// Simplified heterogeneous-network channel: log-distance path loss with
// lognormal shadowing, a fixed indoor penetration loss and Rayleigh fading.
// Macro BSs sit at the center of the deployment square; small cells are
// grouped in clusters placed on the quadrant centers. Small cells in
// different clusters do not interfere with each other.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hetfair/core.hpp"
#include "hetfair/matrix.hpp"
#include "hetfair/random.hpp"

namespace hetfair {

struct PowerRange {
  double min_dbm;
  double max_dbm;
  bool operator==(const PowerRange&) const = default;
};

/// Geometry and radio parameters of one deployment.
struct ChannelParams {
  std::size_t num_bs = 6;
  std::size_t num_users = 40;
  double bandwidth_mhz = 20.0;
  double cell_size_m = 250.0;
  double noise_dbm_hz = -174.0;
  double indoor_prob = 0.5;
  double macro_fraction = 0.1;
  PowerRange macro_power{33.0, 36.0};
  PowerRange small_power{23.0, 30.0};

  // Not given by the reference setup; documented defaults.
  double carrier_ghz = 2.0;
  double macro_exponent = 3.76;
  double small_exponent = 3.19;
  double shadowing_db = 8.0;
  double indoor_loss_db = 20.0;
  std::size_t num_clusters = 3;
  double cluster_radius_m = 30.0;

  std::size_t num_macro() const {
    const auto n = static_cast<std::size_t>(
        std::ceil(macro_fraction * static_cast<double>(num_bs) - 1e-12));
    return std::min(n, num_bs);
  }

  /// Structural checks only; range checks against the reference table live
  /// in the scenario config.
  void validate() const {
    if (num_bs < 1) throw std::invalid_argument("num_bs must be >= 1");
    if (num_users < 1) throw std::invalid_argument("num_users must be >= 1");
    if (!(bandwidth_mhz > 0.0)) {
      throw std::invalid_argument("bandwidth_mhz must be > 0");
    }
    if (!(cell_size_m > 0.0)) {
      throw std::invalid_argument("cell_size_m must be > 0");
    }
    if (!(indoor_prob >= 0.0 && indoor_prob <= 1.0)) {
      throw std::invalid_argument("indoor_prob must be in [0, 1]");
    }
    if (!(macro_fraction >= 0.0 && macro_fraction <= 1.0)) {
      throw std::invalid_argument("macro_fraction must be in [0, 1]");
    }
    if (macro_power.min_dbm > macro_power.max_dbm ||
        small_power.min_dbm > small_power.max_dbm) {
      throw std::invalid_argument("power range min exceeds max");
    }
    if (!(carrier_ghz > 0.0)) {
      throw std::invalid_argument("carrier_ghz must be > 0");
    }
    if (!(shadowing_db >= 0.0)) {
      throw std::invalid_argument("shadowing_db must be >= 0");
    }
    if (num_clusters < 1 || num_clusters > 4) {
      throw std::invalid_argument("num_clusters must be in [1, 4]");
    }
    if (!(cluster_radius_m >= 0.0)) {
      throw std::invalid_argument("cluster_radius_m must be >= 0");
    }
  }

  bool operator==(const ChannelParams&) const = default;
};

enum class BsTier : std::uint8_t { kMacro, kSmall };

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point a, Point b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Placement, powers and frozen shadowing of one realization.
struct Topology {
  std::vector<Point> bs_positions;
  std::vector<Point> user_positions;
  std::vector<double> bs_power_dbm;
  std::vector<BsTier> tier;
  /// Small-cell cluster id, or -1 for macro BSs.
  std::vector<int> cluster;
  double cell_size_m = 0.0;
  std::vector<bool> indoor;
  /// Lognormal shadowing in dB, users x BSs.
  Matrix<double> shadow_db;

  std::size_t num_bs() const { return bs_positions.size(); }
  std::size_t num_users() const { return user_positions.size(); }
};

/// Small-scale fading coefficients, users x BSs.
struct FadingState {
  Matrix<std::complex<double>> h;
  double rho = 1.0;
};

inline Topology generate_topology(const ChannelParams& p, std::uint64_t seed) {
  p.validate();
  Rng rng(seed);
  const double side = p.cell_size_m;
  const std::size_t num_macro = p.num_macro();

  Topology t;
  t.cell_size_m = side;
  t.bs_positions.resize(p.num_bs);
  t.bs_power_dbm.resize(p.num_bs);
  t.tier.resize(p.num_bs);
  t.cluster.resize(p.num_bs);

  const Point center{side / 2, side / 2};
  const std::array<Point, 4> cluster_centers = {
      Point{side / 4, side / 4}, Point{3 * side / 4, side / 4},
      Point{side / 4, 3 * side / 4}, Point{3 * side / 4, 3 * side / 4}};
  constexpr double kTwoPi = 6.283185307179586476925286766559;

  for (std::size_t j = 0; j < p.num_bs; ++j) {
    if (j < num_macro) {
      t.tier[j] = BsTier::kMacro;
      t.cluster[j] = -1;
      if (num_macro == 1) {
        t.bs_positions[j] = center;
      } else {
        const double th = kTwoPi * static_cast<double>(j) /
                          static_cast<double>(num_macro);
        t.bs_positions[j] = {center.x + 0.1 * side * std::cos(th),
                             center.y + 0.1 * side * std::sin(th)};
      }
      t.bs_power_dbm[j] =
          uniform(rng, p.macro_power.min_dbm, p.macro_power.max_dbm);
    } else {
      const std::size_t c = (j - num_macro) % p.num_clusters;
      t.tier[j] = BsTier::kSmall;
      t.cluster[j] = static_cast<int>(c);
      const double r = p.cluster_radius_m * std::sqrt(uniform01(rng));
      const double th = kTwoPi * uniform01(rng);
      const Point cc = cluster_centers[c];
      t.bs_positions[j] = {std::clamp(cc.x + r * std::cos(th), 0.0, side),
                           std::clamp(cc.y + r * std::sin(th), 0.0, side)};
      t.bs_power_dbm[j] =
          uniform(rng, p.small_power.min_dbm, p.small_power.max_dbm);
    }
  }

  t.user_positions.resize(p.num_users);
  t.indoor.resize(p.num_users);
  for (std::size_t i = 0; i < p.num_users; ++i) {
    t.user_positions[i] = {uniform(rng, 0.0, side), uniform(rng, 0.0, side)};
    t.indoor[i] = uniform01(rng) < p.indoor_prob;
  }

  t.shadow_db = Matrix<double>(p.num_users, p.num_bs);
  for (std::size_t i = 0; i < p.num_users; ++i) {
    for (std::size_t j = 0; j < p.num_bs; ++j) {
      t.shadow_db(i, j) = p.shadowing_db * standard_normal(rng);
    }
  }
  return t;
}

/// Circularly-symmetric complex Gaussian with unit variance.
inline std::complex<double> complex_normal(Rng& rng) {
  constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
  const double re = standard_normal(rng);
  const double im = standard_normal(rng);
  return {re * kInvSqrt2, im * kInvSqrt2};
}

/// Unit-power Rayleigh fading draw.
inline FadingState initial_fading(std::size_t num_users, std::size_t num_bs,
                                  double rho, std::uint64_t seed) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("fading correlation must be in [0, 1]");
  }
  Rng rng(seed);
  FadingState s{Matrix<std::complex<double>>(num_users, num_bs), rho};
  for (std::size_t i = 0; i < num_users; ++i) {
    for (std::size_t j = 0; j < num_bs; ++j) s.h(i, j) = complex_normal(rng);
  }
  return s;
}

/// First-order Gauss-Markov step: h' = rho h + sqrt(1 - rho^2) eps.
inline FadingState evolve_fading(const FadingState& s, Rng& rng) {
  if (!(s.rho >= 0.0 && s.rho <= 1.0)) {
    throw std::invalid_argument("fading correlation must be in [0, 1]");
  }
  FadingState next = s;
  if (s.rho == 1.0) return next;
  const double innovation = std::sqrt(1.0 - s.rho * s.rho);
  for (std::size_t i = 0; i < s.h.rows(); ++i) {
    for (std::size_t j = 0; j < s.h.cols(); ++j) {
      next.h(i, j) = s.rho * s.h(i, j) + innovation * complex_normal(rng);
    }
  }
  return next;
}

/// Reference path loss at 1 m (free space), in dB.
inline double reference_loss_db(double carrier_ghz) {
  return 32.4 + 20.0 * std::log10(carrier_ghz);
}

/// Total link gain in dB: path loss, shadowing, indoor loss and fading.
inline double link_gain_db(const ChannelParams& p, const Topology& topo,
                           std::size_t i, std::size_t j,
                           const FadingState& fading) {
  const double d = std::max(
      1.0, distance(topo.user_positions[i], topo.bs_positions[j]));
  const double exponent =
      topo.tier[j] == BsTier::kMacro ? p.macro_exponent : p.small_exponent;
  const double path_loss =
      reference_loss_db(p.carrier_ghz) + 10.0 * exponent * std::log10(d);
  const double indoor = topo.indoor[i] ? p.indoor_loss_db : 0.0;
  const double h = std::max(std::abs(fading.h(i, j)), 1e-15);
  return -path_loss - topo.shadow_db(i, j) - indoor + 20.0 * std::log10(h);
}

/// Whether BS k's transmission is counted as interference on BS j's links.
inline bool interferes(const Topology& topo, std::size_t j, std::size_t k) {
  if (j == k) return false;
  const bool both_small =
      topo.tier[j] == BsTier::kSmall && topo.tier[k] == BsTier::kSmall;
  return !(both_small && topo.cluster[j] != topo.cluster[k]);
}

inline double spectral_efficiency_from_sinr(double sinr) {
  return std::log2(1.0 + sinr);
}

/// gamma_ij = log2(1 + SINR_ij), clamped below at kGammaMin.
inline Matrix<double> spectral_efficiency(const ChannelParams& p,
                                          const Topology& topo,
                                          const FadingState& fading) {
  const std::size_t num_users = topo.num_users();
  const std::size_t num_bs = topo.num_bs();
  if (fading.h.rows() != num_users || fading.h.cols() != num_bs) {
    throw std::invalid_argument("fading state does not match topology");
  }
  const double noise_mw = std::pow(
      10.0, (p.noise_dbm_hz + 10.0 * std::log10(p.bandwidth_mhz * 1e6)) / 10.0);

  Matrix<double> gamma(num_users, num_bs);
  std::vector<double> rx_mw(num_bs);
  for (std::size_t i = 0; i < num_users; ++i) {
    for (std::size_t j = 0; j < num_bs; ++j) {
      rx_mw[j] = std::pow(
          10.0, (topo.bs_power_dbm[j] + link_gain_db(p, topo, i, j, fading)) /
                    10.0);
    }
    for (std::size_t j = 0; j < num_bs; ++j) {
      double interference = 0.0;
      for (std::size_t k = 0; k < num_bs; ++k) {
        if (interferes(topo, j, k)) interference += rx_mw[k];
      }
      const double sinr = rx_mw[j] / (interference + noise_mw);
      gamma(i, j) = std::max(spectral_efficiency_from_sinr(sinr), kGammaMin);
    }
  }
  return gamma;
}

inline NetworkInstance make_instance(const ChannelParams& p,
                                     const Topology& topo,
                                     const FadingState& fading,
                                     AlphaProfile alphas,
                                     InstanceMeta meta = {}) {
  return NetworkInstance(spectral_efficiency(p, topo, fading),
                         std::move(alphas), p.bandwidth_mhz * 1e6,
                         std::move(meta));
}

}  // namespace hetfair
