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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "hetfair/experiment.hpp"

namespace hetfair {
namespace {

namespace fs = std::filesystem;

ScenarioConfig small_config() {
  ScenarioConfig c = low_scenario();
  c.num_seeds = 3;
  c.pricing.total_iters = 60;
  c.ga.max_generations = 5;
  return c;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hetfair_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::size_t line_count(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

TEST(Csv, NineSignificantDigits) {
  EXPECT_EQ(csv::format(1.0 / 3.0), "0.333333333");
  EXPECT_EQ(csv::format(4e7), "40000000");
  EXPECT_EQ(csv::format(-0.25), "-0.25");
  EXPECT_EQ(csv::escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv::escape("say \"x\""), "\"say \"\"x\"\"\"");
}

TEST(Stats, KnownValues) {
  const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(stats::mean(v), 2.5);
  EXPECT_DOUBLE_EQ(stats::stddev(v), std::sqrt(5.0 / 3.0));
  EXPECT_DOUBLE_EQ(stats::ci95(v), 1.96 * std::sqrt(5.0 / 3.0) / 2.0);
  EXPECT_EQ(stats::stddev(std::vector<double>{7.0}), 0.0);
  EXPECT_DOUBLE_EQ(stats::quantile_sorted(v, 0.5), 2.5);
}

TEST(Stats, PairedBootstrap) {
  std::vector<double> a, b;
  Rng rng(1);
  for (int k = 0; k < 200; ++k) {
    b.push_back(standard_normal(rng));
    a.push_back(b.back() + 0.5 + 0.1 * standard_normal(rng));
  }
  const auto up = stats::paired_bootstrap(a, b, 3);
  EXPECT_GT(up.lower, 0.4);
  EXPECT_LT(up.upper, 0.6);
  EXPECT_LE(up.lower, up.mean_diff);
  EXPECT_GE(up.upper, up.mean_diff);
  const auto same = stats::paired_bootstrap(b, b, 3);
  EXPECT_EQ(same.lower, 0.0);
  EXPECT_EQ(same.upper, 0.0);
}

TEST(Experiment, OneOutcomePerMethodAndSeed) {
  const ScenarioConfig c = small_config();
  const StaticResult r = run_static(c);
  ASSERT_EQ(r.seeds.size(), 3u);
  for (const auto& s : r.seeds) {
    ASSERT_EQ(s.outcomes.size(), c.methods.size());
    for (std::size_t k = 0; k < c.methods.size(); ++k) {
      EXPECT_EQ(s.outcomes[k].method, c.methods[k]);
      EXPECT_TRUE(std::isfinite(s.outcomes[k].haf));
      EXPECT_EQ(s.outcomes[k].certificate.has_value(), c.methods[k] == "Proposed");
    }
  }
  EXPECT_EQ(per_seed_table(r).size(), 3 * c.methods.size());
}

TEST(Experiment, SingleMethodSummary) {
  ScenarioConfig c = small_config();
  c.methods = {"MaxSinr"};
  const StaticResult r = run_static(c);
  const csv::Table t = summary_haf_table(r);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(summary_metrics_table(r).size(), 5u);
}

TEST(Experiment, MatchesDirectCalls) {
  ScenarioConfig c = small_config();
  c.methods = {"Proposed", "MaxSinr"};
  const StaticResult r = run_static(c);
  const NetworkInstance inst = build_instance(c, 1);
  EXPECT_EQ(r.seeds[1].outcomes[0].haf, solve(inst, c.pricing, c.ra).haf);
  EXPECT_EQ(r.seeds[1].outcomes[1].haf, run_max_sinr(inst, c.ra).haf);
  EXPECT_EQ(r.seeds[1].outcomes[1].metrics.overall.haf,
            r.seeds[1].outcomes[1].haf);
}

TEST(Experiment, ThreadCountDoesNotChangeOutput) {
  const ScenarioConfig c = small_config();
  const std::string one = per_seed_table(run_static(c, 1)).str();
  const std::string three = per_seed_table(run_static(c, 3)).str();
  EXPECT_EQ(one, three);
  EXPECT_EQ(one, per_seed_table(run_static(c, 1)).str());
}

TEST(Experiment, WritesFilesAndManifest) {
  const fs::path dir = scratch_dir("static");
  ScenarioConfig c = small_config();
  c.methods = {"Proposed", "Random"};
  run_static_experiment(c, dir);
  const std::string per_seed = slurp(dir / "per_seed.csv");
  EXPECT_EQ(line_count(per_seed), 1 + 3 * 2u);
  EXPECT_EQ(per_seed.rfind("seed,method,haf,", 0), 0u);
  EXPECT_TRUE(fs::exists(dir / "summary_haf.csv"));
  EXPECT_TRUE(fs::exists(dir / "summary_metrics.csv"));
  EXPECT_NE(slurp(dir / "manifest.csv").find("per_seed.csv,6,"),
            std::string::npos);
  EXPECT_EQ(load_config((dir / "config.ini").string()), c);
  fs::remove_all(dir);
}

TEST(Experiment, UnwritableOutputFailsBeforeWork) {
  const fs::path dir = scratch_dir("blocker");
  fs::create_directories(dir);
  const fs::path file = dir / "file";
  std::ofstream(file) << "x";
  ScenarioConfig c = small_config();
  c.num_seeds = 100000;  // would take far too long if it ran
  EXPECT_THROW(run_static_experiment(c, file / "out"), IoError);
  fs::remove_all(dir);
}

TEST(Experiment, UserSweep) {
  const fs::path dir = scratch_dir("sweep");
  ScenarioConfig c = small_config();
  c.num_seeds = 2;
  c.methods = {"Proposed", "MaxSinr"};
  const auto pts = run_user_sweep(c, {40, 50}, dir);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(build_instance(c, 0).num_users(), 40u);
  EXPECT_EQ(pts[1].result.seeds[0].outcomes[0].metrics.overall.users, 50u);
  EXPECT_EQ(line_count(slurp(dir / "sweep_haf.csv")), 1 + 2 * 2u);
  EXPECT_THROW(run_user_sweep(c, {70}, dir), ConfigError);
  fs::remove_all(dir);
}

TEST(TimeVarying, StaticChannelKeepsFixedMethodsConstant) {
  ScenarioConfig c = small_config();
  c.num_seeds = 2;
  c.methods = {"Proposed", "MaxSinr"};
  c.time_varying = TimeVaryingConfig{1.0, 5, 3};
  const auto r = run_time_varying(c);
  ASSERT_EQ(r.methods, (std::vector<std::string>{"Proposed", "Frozen", "MaxSinr"}));
  for (const auto& seed : r.haf) {
    for (std::size_t k = 1; k < 3; ++k) {
      for (double v : seed[k]) EXPECT_EQ(v, seed[k][0]);
    }
  }
}

TEST(TimeVarying, FirstSlotIsTheStaticInstance) {
  ScenarioConfig c = small_config();
  c.num_seeds = 2;
  c.methods = {"Proposed", "MaxSinr", "2RS"};
  c.time_varying = TimeVaryingConfig{0.9, 3, 3};
  const auto tv = run_time_varying(c);
  const auto st = run_static(c);
  for (std::size_t s = 0; s < 2; ++s) {
    EXPECT_EQ(tv.haf[s][0][0], st.seeds[s].outcomes[0].haf);
    EXPECT_EQ(tv.haf[s][1][0], st.seeds[s].outcomes[0].haf);  // Frozen
    EXPECT_EQ(tv.haf[s][2][0], st.seeds[s].outcomes[1].haf);
    EXPECT_EQ(tv.haf[s][3][0], st.seeds[s].outcomes[2].haf);
  }
}

TEST(TimeVarying, WritesOutputs) {
  const fs::path dir = scratch_dir("tv");
  ScenarioConfig c = small_config();
  c.num_seeds = 2;
  c.methods = {"Proposed", "PF"};
  c.time_varying = TimeVaryingConfig{0.9, 4, 2};
  run_time_varying_experiment(c, dir);
  EXPECT_EQ(line_count(slurp(dir / "timevary_slots.csv")), 1 + 2 * 4 * 3u);
  EXPECT_EQ(line_count(slurp(dir / "timevary_per_slot.csv")), 1 + 4 * 3u);
  EXPECT_EQ(line_count(slurp(dir / "timevary_summary.csv")), 1 + 3u);
  c.time_varying.reset();
  EXPECT_THROW(run_time_varying(c), ConfigError);
  fs::remove_all(dir);
}

TEST(Convergence, TraceColumns) {
  RunTrace t;
  IterationRecord a;
  a.iter = 1;
  a.primal_haf = 1.0;
  a.dual_value = 5.0;
  IterationRecord b;
  b.iter = 2;
  b.primal_haf = 0.5;
  b.dual_value = 6.0;
  IterationRecord c;
  c.iter = 3;
  c.primal_haf = 2.0;
  c.dual_value = 3.0;
  t.iterations = {a, b, c};
  EXPECT_EQ(emit_convergence_trace(t).str(),
            "iter,primal_haf,dual_value,gap\n1,1,5,4\n2,0.5,6,4\n3,2,3,1\n");
  t.iterations[0].dual_value.reset();
  t.iterations[1].dual_value.reset();
  t.iterations[2].dual_value.reset();
  EXPECT_EQ(emit_convergence_trace(t).str(),
            "iter,primal_haf,dual_value,gap\n1,1,,\n2,0.5,,\n3,2,,\n");
  EXPECT_EQ(emit_convergence_trace(RunTrace{}).str(),
            "iter,primal_haf,dual_value,gap\n");
}

TEST(Convergence, GapIsNonIncreasingAndNonNegative) {
  const fs::path dir = scratch_dir("conv");
  ScenarioConfig c = small_config();
  c.methods = {"Proposed", "PF"};
  const auto outs = run_convergence(c, 0, dir);
  ASSERT_EQ(outs.size(), 2u);
  const RunTrace& t = *outs[0].trace;
  double best_p = -1e300, best_d = 1e300, prev_gap = 1e300;
  for (const auto& r : t.iterations) {
    best_p = std::max(best_p, r.primal_haf);
    best_d = std::min(best_d, *r.dual_value);
    const double gap = best_d - best_p;
    EXPECT_GE(gap, -1e-9);
    EXPECT_LE(gap, prev_gap);
    prev_gap = gap;
  }
  EXPECT_EQ(line_count(slurp(dir / "convergence.csv")), 1 + 60u);
  EXPECT_EQ(line_count(slurp(dir / "convergence_baselines.csv")), 1 + 60u);
  EXPECT_EQ(line_count(slurp(dir / "convergence_certificate.csv")), 2u);
  fs::remove_all(dir);
}

TEST(Oracle, BoundHoldsOnTinyInstances) {
  ScenarioConfig c = small_config();
  c.pricing.total_iters = 200;
  const OracleResult r = run_oracle(c, 20, 5, 3);
  ASSERT_EQ(r.cases.size(), 20u);
  EXPECT_EQ(r.bound_failures(), 0u);
  for (const auto& k : r.cases) {
    EXPECT_LE(k.proposed_haf, k.optimum_haf + 1e-9 * (1.0 + std::abs(k.optimum_haf)));
  }
}

}  // namespace
}  // namespace hetfair
