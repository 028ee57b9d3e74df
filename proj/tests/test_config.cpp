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
#include <string>

#include <gtest/gtest.h>

#include "hetfair/config.hpp"
#include "hetfair/experiment.hpp"

namespace hetfair {
namespace {

TEST(Config, DefaultsAreValid) {
  EXPECT_NO_THROW(low_scenario().validate());
  EXPECT_NO_THROW(high_scenario().validate());
  EXPECT_EQ(high_scenario().alpha_ratios, kHighRatios);
  EXPECT_EQ(low_scenario().master_seed, 42u);
}

TEST(Config, EmptyTextGivesDefaults) {
  EXPECT_EQ(parse_config_string(""), low_scenario());
}

TEST(Config, RoundTripDefaults) {
  for (const auto& c : {low_scenario(), high_scenario()}) {
    EXPECT_EQ(parse_config_string(serialize(c)), c);
  }
}

TEST(Config, RoundTripEditedValues) {
  ScenarioConfig c = high_scenario();
  c.name = "edited";
  c.channel.num_users = 55;
  c.channel.shadowing_db = 7.123456789012345;
  c.channel.macro_power = {34.1, 35.9};
  c.num_seeds = 17;
  c.master_seed = 0xFFFFFFFFFFFFull;
  c.pricing.eta0 = 0.1 / 3.0;
  c.pricing.schedule = StepSchedule::kConstant;
  c.ra.method = LambdaMethod::kDigitSearch;
  c.ra.bisect_tol = 1e-13;
  c.time_varying = TimeVaryingConfig{0.75, 33, 4};
  c.methods = {"Proposed", "2RS", "BruteForce"};
  c.ga.mutation_prob = 0.07;
  c.two_rs_max_passes = 3;
  c.alpha_low = 0.3;
  c.alpha_high = 2.5;
  c.alpha_ratios = {0.1, 0.2, 0.3, 0.4};
  ASSERT_NO_THROW(c.validate());
  EXPECT_EQ(parse_config_string(serialize(c)), c);

  c.force = true;
  c.channel.num_bs = 12;
  c.channel.num_users = 5;
  EXPECT_EQ(parse_config_string(serialize(c)), c);
}

TEST(Config, ParsesSections) {
  const auto c = parse_config_string(
      "[scenario]\nnum_users = 50\nalpha_ratios = high\n"
      "[pricing]\ntotal_iters = 200\nschedule = constant\n"
      "[time_varying]\nenabled = true\nrho = 0.5\n"
      "[methods]\nlist = Proposed, MaxSinr\n");
  EXPECT_EQ(c.channel.num_users, 50u);
  EXPECT_EQ(c.alpha_ratios, kHighRatios);
  EXPECT_EQ(c.pricing.total_iters, 200u);
  EXPECT_EQ(c.pricing.schedule, StepSchedule::kConstant);
  ASSERT_TRUE(c.time_varying);
  EXPECT_EQ(c.time_varying->rho, 0.5);
  EXPECT_EQ(c.time_varying->num_slots, 200u);
  EXPECT_EQ(c.methods, (std::vector<std::string>{"Proposed", "MaxSinr"}));
}

TEST(Config, RejectsUnknownNames) {
  EXPECT_THROW(parse_config_string("[scenario]\nnum_userz = 40\n"),
               ConfigError);
  EXPECT_THROW(parse_config_string("[bogus]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_string("[methods]\nlist = Proposed, Oracle\n"),
               ConfigError);
  EXPECT_THROW(parse_config_string("[pricing]\nschedule = fast\n"),
               ConfigError);
}

TEST(Config, RejectsMalformedValues) {
  EXPECT_THROW(parse_config_string("[scenario]\nnum_users = forty\n"),
               ConfigError);
  EXPECT_THROW(parse_config_string("[scenario]\nnum_users = -3\n"),
               ConfigError);
  EXPECT_THROW(parse_config_string("[pricing]\neta0 = 0.1x\n"), ConfigError);
  EXPECT_THROW(parse_config_string("[scenario]\nforce = maybe\n"),
               ConfigError);
  EXPECT_THROW(parse_config_string("[scenario]\nalpha_ratios = 0.5,0.5\n"),
               ConfigError);
}

TEST(Config, ReferenceRangesUnlessForced) {
  EXPECT_THROW(parse_config_string("[scenario]\nnum_bs = 7\n"), ConfigError);
  EXPECT_THROW(parse_config_string("[scenario]\nnum_users = 61\n"),
               ConfigError);
  EXPECT_THROW(parse_config_string("[channel]\nbandwidth_mhz = 10\n"),
               ConfigError);
  EXPECT_THROW(parse_config_string("[channel]\nmacro_power_dbm = 33, 40\n"),
               ConfigError);
  EXPECT_THROW(parse_config_string("[channel]\nindoor_prob = 0.3\n"),
               ConfigError);
  const auto c = parse_config_string(
      "[scenario]\nforce = true\nnum_bs = 7\nnum_users = 61\n"
      "[channel]\nbandwidth_mhz = 10\nindoor_prob = 0.3\n");
  EXPECT_EQ(c.channel.num_bs, 7u);
  EXPECT_EQ(c.channel.num_users, 61u);
  // Structural errors are not waived.
  EXPECT_THROW(parse_config_string(
                   "[scenario]\nforce = true\n[channel]\nindoor_prob = 1.5\n"),
               ConfigError);
}

TEST(Config, RatiosMustSumToOne) {
  EXPECT_THROW(
      parse_config_string("[scenario]\nalpha_ratios = 0.3,0.3,0.3,0.3\n"),
      ConfigError);
  EXPECT_THROW(
      parse_config_string("[scenario]\nalpha_ratios = 1.5,-0.5,0,0\n"),
      ConfigError);
  EXPECT_NO_THROW(parse_config_string("[scenario]\nalpha_ratios = 1,0,0,0\n"));
}

TEST(Config, TimeVaryingChecks) {
  EXPECT_THROW(parse_config_string("[time_varying]\nenabled = true\nrho = 0\n"),
               ConfigError);
  EXPECT_THROW(
      parse_config_string("[time_varying]\nenabled = true\nrho = 1.2\n"),
      ConfigError);
  EXPECT_NO_THROW(
      parse_config_string("[time_varying]\nenabled = true\nrho = 1\n"));
  EXPECT_THROW(
      parse_config_string("[time_varying]\nenabled = false\nrho = 0.5\n"),
      ConfigError);
  EXPECT_FALSE(
      parse_config_string("[time_varying]\nenabled = false\n").time_varying);
}

TEST(Config, MissingFileIsConfigError) {
  EXPECT_THROW(load_config("/nonexistent/dir/cfg.ini"), ConfigError);
}

TEST(Config, AlphaExponentsForFairBaselines) {
  EXPECT_THROW(parse_config_string("[methods]\nalpha_low = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_string("[methods]\nalpha_high = 0\n"), ConfigError);
}

TEST(SampleAlphas, SingleGroup) {
  const auto p = sample_alphas(1000, {1.0, 0.0, 0.0, 0.0}, 3);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(p.group[i], Group::A1);
    EXPECT_TRUE(interval_of(Group::A1).contains(p.alpha[i]));
  }
}

TEST(SampleAlphas, ProportionsFollowRatios) {
  for (const auto& ratios : {kLowRatios, kHighRatios}) {
    const auto p = sample_alphas(100000, ratios, 5);
    std::array<double, kNumGroups> count{};
    for (std::size_t i = 0; i < p.size(); ++i) {
      count[index_of(p.group[i])] += 1.0;
      EXPECT_TRUE(interval_of(p.group[i]).contains(p.alpha[i]));
    }
    for (std::size_t g = 0; g < kNumGroups; ++g) {
      EXPECT_NEAR(count[g] / 1e5, ratios[g], 0.01);
    }
  }
}

TEST(SampleAlphas, Deterministic) {
  EXPECT_EQ(sample_alphas(50, kLowRatios, 8), sample_alphas(50, kLowRatios, 8));
  EXPECT_NE(sample_alphas(50, kLowRatios, 8), sample_alphas(50, kLowRatios, 9));
}

}  // namespace
}  // namespace hetfair
