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

#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "hetfair/channel.hpp"

namespace hetfair {
namespace {

Topology line_topology(std::size_t num_bs, double user_x) {
  Topology t;
  t.cell_size_m = 250.0;
  for (std::size_t j = 0; j < num_bs; ++j) {
    t.bs_positions.push_back({0.0, 0.0});
    t.bs_power_dbm.push_back(30.0);
    t.tier.push_back(j == 0 ? BsTier::kMacro : BsTier::kSmall);
    t.cluster.push_back(j == 0 ? -1 : 0);
  }
  t.user_positions.push_back({user_x, 0.0});
  t.indoor.push_back(false);
  t.shadow_db = Matrix<double>(1, num_bs, 0.0);
  return t;
}

FadingState unit_fading(std::size_t users, std::size_t bs) {
  return {Matrix<std::complex<double>>(users, bs, {1.0, 0.0}), 1.0};
}

TEST(Topology, Deterministic) {
  const ChannelParams p;
  const Topology a = generate_topology(p, 7);
  const Topology b = generate_topology(p, 7);
  EXPECT_EQ(a.bs_positions.size(), 6u);
  for (std::size_t j = 0; j < 6; ++j) {
    EXPECT_EQ(a.bs_positions[j].x, b.bs_positions[j].x);
    EXPECT_EQ(a.bs_power_dbm[j], b.bs_power_dbm[j]);
  }
  for (std::size_t i = 0; i < 40; ++i) {
    EXPECT_EQ(a.user_positions[i].y, b.user_positions[i].y);
    EXPECT_EQ(a.indoor[i], b.indoor[i]);
  }
  EXPECT_EQ(a.shadow_db, b.shadow_db);
}

TEST(Topology, Defaults) {
  const ChannelParams p;
  EXPECT_EQ(p.num_bs, 6u);
  EXPECT_EQ(p.cell_size_m, 250.0);
  EXPECT_EQ(p.noise_dbm_hz, -174.0);
  EXPECT_EQ(p.bandwidth_mhz, 20.0);
  EXPECT_EQ(p.num_macro(), 1u);
  const Topology t = generate_topology(p, 1);
  EXPECT_EQ(t.cell_size_m, 250.0);
}

TEST(Topology, NoIndoorUsersWhenProbabilityZero) {
  ChannelParams p;
  p.indoor_prob = 0.0;
  const Topology t = generate_topology(p, 3);
  for (bool b : t.indoor) EXPECT_FALSE(b);
}

TEST(Topology, PowersPositionsAndClusters) {
  ChannelParams p;
  p.num_bs = 12;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Topology t = generate_topology(p, s);
    const std::size_t macros = p.num_macro();
    EXPECT_EQ(macros, 2u);
    for (std::size_t j = 0; j < p.num_bs; ++j) {
      const bool macro = j < macros;
      EXPECT_EQ(t.tier[j] == BsTier::kMacro, macro);
      const PowerRange r = macro ? p.macro_power : p.small_power;
      EXPECT_GE(t.bs_power_dbm[j], r.min_dbm);
      EXPECT_LE(t.bs_power_dbm[j], r.max_dbm);
      EXPECT_GE(t.bs_positions[j].x, 0.0);
      EXPECT_LE(t.bs_positions[j].x, p.cell_size_m);
      if (!macro) {
        EXPECT_GE(t.cluster[j], 0);
        EXPECT_LT(t.cluster[j], 3);
      }
    }
    for (const Point& u : t.user_positions) {
      EXPECT_GE(u.x, 0.0);
      EXPECT_LE(u.y, p.cell_size_m);
    }
  }
}

TEST(Topology, RejectsEmptyNetwork) {
  ChannelParams p;
  p.num_bs = 0;
  EXPECT_THROW(generate_topology(p, 0), std::invalid_argument);
  p.num_bs = 6;
  p.num_users = 0;
  EXPECT_THROW(generate_topology(p, 0), std::invalid_argument);
}

TEST(LinkGain, ReferenceDistance) {
  const ChannelParams p;
  const Topology t = line_topology(1, 1.0);
  EXPECT_NEAR(link_gain_db(p, t, 0, 0, unit_fading(1, 1)),
              -(32.4 + 20.0 * std::log10(2.0)), 1e-12);
  EXPECT_NEAR(link_gain_db(p, t, 0, 0, unit_fading(1, 1)), -38.42, 5e-3);
}

TEST(LinkGain, DistanceFlooredAtOneMetre) {
  const ChannelParams p;
  EXPECT_EQ(link_gain_db(p, line_topology(1, 0.2), 0, 0, unit_fading(1, 1)),
            link_gain_db(p, line_topology(1, 1.0), 0, 0, unit_fading(1, 1)));
}

TEST(LinkGain, IndoorLossIsAdditive) {
  const ChannelParams p;
  Topology t = line_topology(1, 40.0);
  const double out = link_gain_db(p, t, 0, 0, unit_fading(1, 1));
  t.indoor[0] = true;
  EXPECT_NEAR(out - link_gain_db(p, t, 0, 0, unit_fading(1, 1)), 20.0, 1e-12);
}

TEST(LinkGain, DoublingDistanceUnderMacroExponent) {
  const ChannelParams p;
  const double g1 =
      link_gain_db(p, line_topology(1, 50.0), 0, 0, unit_fading(1, 1));
  const double g2 =
      link_gain_db(p, line_topology(1, 100.0), 0, 0, unit_fading(1, 1));
  EXPECT_NEAR(g1 - g2, 37.6 * std::log10(2.0), 1e-12);
  EXPECT_NEAR(g1 - g2, 11.32, 5e-3);
}

TEST(SpectralEfficiency, FromSinr) {
  EXPECT_DOUBLE_EQ(spectral_efficiency_from_sinr(1.0), 1.0);
  EXPECT_DOUBLE_EQ(spectral_efficiency_from_sinr(3.0), 2.0);
}

TEST(SpectralEfficiency, SingleBsAtUnitSinr) {
  ChannelParams p;
  p.num_bs = 1;
  Topology t = line_topology(1, 10.0);
  // Choose the noise level so that SINR is exactly 1.
  const double rx_dbm = 30.0 + link_gain_db(p, t, 0, 0, unit_fading(1, 1));
  p.noise_dbm_hz = rx_dbm - 10.0 * std::log10(p.bandwidth_mhz * 1e6);
  const auto g = spectral_efficiency(p, t, unit_fading(1, 1));
  EXPECT_NEAR(g(0, 0), 1.0, 1e-9);
}

TEST(SpectralEfficiency, SymmetricInterferenceLimit) {
  ChannelParams p;
  p.num_bs = 2;
  p.noise_dbm_hz = -400.0;
  p.macro_exponent = p.small_exponent;
  Topology t = line_topology(2, 30.0);
  t.tier[0] = BsTier::kSmall;
  t.cluster[0] = 0;
  const auto g = spectral_efficiency(p, t, unit_fading(1, 2));
  EXPECT_NEAR(g(0, 0), 1.0, 1e-9);
  EXPECT_NEAR(g(0, 1), 1.0, 1e-9);
}

TEST(SpectralEfficiency, InterClusterInterferenceIgnored) {
  ChannelParams p;
  p.num_bs = 2;
  p.noise_dbm_hz = -400.0;
  Topology t = line_topology(2, 30.0);
  t.tier[0] = BsTier::kSmall;
  t.cluster[0] = 1;
  EXPECT_FALSE(interferes(t, 0, 1));
  const auto g = spectral_efficiency(p, t, unit_fading(1, 2));
  EXPECT_GT(g(0, 0), 10.0);
  t.cluster[0] = 0;
  EXPECT_TRUE(interferes(t, 0, 1));
}

TEST(SpectralEfficiency, StrictlyPositive) {
  ChannelParams p;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Topology t = generate_topology(p, s);
    const auto f = initial_fading(p.num_users, p.num_bs, 1.0, s + 1000);
    const auto g = spectral_efficiency(p, t, f);
    for (double v : g.data()) {
      EXPECT_GE(v, kGammaMin);
      EXPECT_TRUE(std::isfinite(v));
    }
  }
}

TEST(Fading, RhoOneIsIdentity) {
  Rng rng(1);
  FadingState s = initial_fading(4, 3, 1.0, 9);
  EXPECT_EQ(evolve_fading(s, rng).h, s.h);
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ma += a[k];
    mb += b[k];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    sab += (a[k] - ma) * (b[k] - mb);
    saa += (a[k] - ma) * (a[k] - ma);
    sbb += (b[k] - mb) * (b[k] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

TEST(Fading, RhoZeroIsIndependent) {
  Rng rng(2);
  const std::size_t n = 100000;
  const FadingState s = initial_fading(1, n, 0.0, 5);
  const FadingState t = evolve_fading(s, rng);
  std::vector<double> a(n), b(n);
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = s.h(0, k).real();
    b[k] = t.h(0, k).real();
  }
  EXPECT_LT(std::abs(pearson(a, b)), 0.02);
}

TEST(Fading, LagOneCorrelationAndStationarity) {
  Rng rng(3);
  const std::size_t steps = 100000;
  FadingState s = initial_fading(1, 1, 0.9, 8);
  std::vector<double> a, b;
  double power = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    FadingState next = evolve_fading(s, rng);
    a.push_back(s.h(0, 0).real());
    b.push_back(next.h(0, 0).real());
    power += std::norm(next.h(0, 0));
    s = std::move(next);
  }
  const double c = pearson(a, b);
  EXPECT_GE(c, 0.88);
  EXPECT_LE(c, 0.92);
  EXPECT_NEAR(power / static_cast<double>(steps), 1.0, 0.02);
}

TEST(Fading, InitialDrawHasUnitPower) {
  const FadingState s = initial_fading(200, 500, 0.9, 4);
  double p = 0.0;
  for (const auto& h : s.h.data()) p += std::norm(h);
  EXPECT_NEAR(p / 100000.0, 1.0, 0.02);
}

TEST(Fading, RejectsBadRho) {
  EXPECT_THROW(initial_fading(1, 1, 1.5, 0), std::invalid_argument);
  EXPECT_THROW(initial_fading(1, 1, -0.1, 0), std::invalid_argument);
}

}  // namespace
}  // namespace hetfair
