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

// Command-line front end: static, sweep, timevary, converge, oracle.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hetfair/hetfair.hpp"

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::string methods;
  std::size_t threads = 1;
  std::optional<std::size_t> num_seeds;
  std::string scenario;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "INI config file");
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_option("--methods", c.methods,
                  "comma-separated method list (overrides the config)");
  cmd->add_option("--threads", c.threads, "worker threads (0 = all cores)")
      ->capture_default_str();
  cmd->add_option("--num-seeds", c.num_seeds, "number of seeds");
  cmd->add_option("--scenario", c.scenario,
                  "'low' or 'high' preset applied before the config file")
      ->check(CLI::IsMember({"low", "high"}));
}

hetfair::ScenarioConfig resolve(const Common& c) {
  hetfair::ScenarioConfig cfg;
  if (!c.config_path.empty()) {
    cfg = hetfair::load_config(c.config_path);
  } else if (c.scenario == "high") {
    cfg = hetfair::high_scenario();
  }
  if (!c.config_path.empty() && !c.scenario.empty()) {
    throw hetfair::ConfigError("--scenario and --config are exclusive");
  }
  if (c.seed) cfg.master_seed = *c.seed;
  if (!c.methods.empty()) cfg.methods = hetfair::detail::split_list(c.methods);
  if (c.num_seeds) cfg.num_seeds = *c.num_seeds;
  cfg.validate();
  return cfg;
}

std::size_t thread_count(const Common& c) {
  if (c.threads > 0) return c.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

void print_summary(const hetfair::StaticResult& res) {
  for (const auto& m : res.methods) {
    const auto h = res.haf(m);
    std::printf("%-18s mean HAF %12.4f  sd %10.4f\n", m.c_str(),
                hetfair::stats::mean(h), hetfair::stats::stddev(h));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous alpha-fair user association and bandwidth "
               "allocation"};
  app.require_subcommand(1);

  Common common;
  auto* st = app.add_subcommand("static", "static-channel experiment");
  add_common(st, common);

  auto* sw = app.add_subcommand("sweep", "static experiment per user count");
  add_common(sw, common);
  std::vector<std::size_t> users = {40, 45, 50, 55, 60};
  sw->add_option("--users", users, "user counts")->delimiter(',');

  auto* tv = app.add_subcommand("timevary", "time-varying channel experiment");
  add_common(tv, common);
  std::optional<double> rho;
  std::optional<std::size_t> slots;
  tv->add_option("--rho", rho, "adjacent-slot fading correlation");
  tv->add_option("--slots", slots, "number of slots");

  auto* cv = app.add_subcommand("converge", "convergence trace of one seed");
  add_common(cv, common);
  std::uint64_t index = 0;
  cv->add_option("--index", index, "seed index")->capture_default_str();

  auto* orc = app.add_subcommand("oracle", "brute-force cross-check");
  add_common(orc, common);
  std::size_t instances = 200;
  std::size_t small_users = 6;
  std::size_t small_bs = 3;
  orc->add_option("--instances", instances)->capture_default_str();
  orc->add_option("--users", small_users)->capture_default_str();
  orc->add_option("--bs", small_bs)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    hetfair::ScenarioConfig cfg = resolve(common);
    const std::size_t threads = thread_count(common);

    if (st->parsed()) {
      const auto res = hetfair::run_static_experiment(cfg, common.out, threads);
      print_summary(res);
    } else if (sw->parsed()) {
      const auto pts = hetfair::run_user_sweep(cfg, users, common.out, threads);
      for (const auto& p : pts) {
        std::printf("users %zu\n", p.users);
        print_summary(p.result);
      }
    } else if (tv->parsed()) {
      if (rho || slots) {
        if (!cfg.time_varying) cfg.time_varying.emplace();
        if (rho) cfg.time_varying->rho = *rho;
        if (slots) cfg.time_varying->num_slots = *slots;
      }
      if (!cfg.time_varying) cfg.time_varying.emplace();
      const auto res =
          hetfair::run_time_varying_experiment(cfg, common.out, threads);
      for (const auto& m : res.methods) {
        std::printf("%-18s mean HAF %12.4f\n", m.c_str(),
                    hetfair::stats::mean(res.seed_means(m)));
      }
    } else if (cv->parsed()) {
      const auto outs = hetfair::run_convergence(cfg, index, common.out);
      const auto& c = *outs.front().certificate;
      std::printf("HAF %.6f  bound %.6f  empirical gap %.6f\n",
                  outs.front().haf, c.theorem2_bound, c.empirical_gap);
    } else if (orc->parsed()) {
      const auto res = hetfair::run_oracle_experiment(
          cfg, instances, small_users, small_bs, common.out, threads);
      std::printf("instances %zu  bound failures %zu  within 1%%: %.3f\n",
                  res.cases.size(), res.bound_failures(),
                  res.fraction_within_1pct());
    }
  } catch (const hetfair::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const hetfair::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
