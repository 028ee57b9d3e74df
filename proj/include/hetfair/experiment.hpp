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

// Monte-Carlo experiment runner: builds seeded instances, runs the configured
// methods, and writes CSV tables plus a manifest.
//
// Every random draw is keyed by (master seed, seed index, purpose), so the
// channel of seed k is the same whatever methods run alongside it, and the
// output does not depend on the number of worker threads.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hetfair/baselines.hpp"
#include "hetfair/channel.hpp"
#include "hetfair/config.hpp"
#include "hetfair/core.hpp"
#include "hetfair/csv.hpp"
#include "hetfair/metrics.hpp"
#include "hetfair/pricing.hpp"
#include "hetfair/random.hpp"
#include "hetfair/stats.hpp"

namespace hetfair {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Group drawn from the ratios, alpha uniform in the group's interval.
inline AlphaProfile sample_alphas(std::size_t num_users,
                                  const AlphaRatios& ratios,
                                  std::uint64_t seed) {
  Rng rng(seed);
  AlphaProfile out;
  out.alpha.reserve(num_users);
  out.group.reserve(num_users);
  for (std::size_t i = 0; i < num_users; ++i) {
    const double u = uniform01(rng);
    double acc = 0.0;
    std::size_t g = kNumGroups - 1;
    for (std::size_t k = 0; k < kNumGroups; ++k) {
      acc += ratios[k];
      if (u < acc && ratios[k] > 0.0) {
        g = k;
        break;
      }
    }
    // Rounding can leave u above the last cumulative sum.
    while (ratios[g] <= 0.0 && g > 0) --g;
    const AlphaInterval iv = interval_of(kGroups[g]);
    out.group.push_back(kGroups[g]);
    out.alpha.push_back(uniform(rng, iv.lo, iv.hi));
  }
  return out;
}

inline AlphaProfile sample_alphas(const ScenarioConfig& cfg,
                                  std::uint64_t seed) {
  return sample_alphas(cfg.channel.num_users, cfg.alpha_ratios, seed);
}

/// Everything needed to regenerate the channel of one seed over time.
struct SeedWorld {
  Topology topology;
  FadingState fading;
  AlphaProfile alphas;
  InstanceMeta meta;
};

inline SeedWorld build_world(const ChannelParams& channel,
                             const AlphaRatios& ratios, double rho,
                             std::uint64_t master, std::uint64_t index,
                             const std::string& scenario) {
  SeedWorld w;
  w.topology = generate_topology(
      channel, derive_seed(master, index, SeedPurpose::kTopology));
  w.fading = initial_fading(channel.num_users, channel.num_bs, rho,
                            derive_seed(master, index, SeedPurpose::kFading));
  w.alphas = sample_alphas(channel.num_users, ratios,
                           derive_seed(master, index, SeedPurpose::kAlphas));
  w.meta = InstanceMeta{master, index, 0, scenario};
  return w;
}

inline NetworkInstance world_instance(const ChannelParams& channel,
                                      const SeedWorld& w, std::size_t slot) {
  InstanceMeta meta = w.meta;
  meta.slot = slot;
  return make_instance(channel, w.topology, w.fading, w.alphas, meta);
}

inline NetworkInstance build_instance(const ScenarioConfig& cfg,
                                      std::uint64_t index) {
  const SeedWorld w = build_world(cfg.channel, cfg.alpha_ratios, 1.0,
                                  cfg.master_seed, index, cfg.name);
  return world_instance(cfg.channel, w, 0);
}

/// Result of one method on one instance.
struct MethodOutcome {
  std::string method;
  Association association;
  Allocation allocation;
  double haf = 0.0;
  MetricsReport metrics;
  std::optional<GapCertificate> certificate;
  /// Iteration trace for pricing methods.
  std::optional<RunTrace> trace;
};

inline bool is_pricing_method(const std::string& m) {
  return m == "Proposed" || m == "PF" || m == "AF-Low" || m == "AF-High" ||
         m == "MinLatency" || m == "MinLatency-Argmin";
}

inline BaselineSpec pricing_spec(const ScenarioConfig& cfg,
                                 const std::string& m) {
  BaselineSpec s;
  s.pricing = cfg.pricing;
  s.ga = cfg.ga;
  s.two_rs_max_passes = cfg.two_rs_max_passes;
  if (m == "PF") {
    s.kind = BaselineKind::kPF;
  } else if (m == "AF-Low") {
    s.kind = BaselineKind::kAlphaFair;
    s.alpha_fixed = cfg.alpha_low;
  } else if (m == "AF-High") {
    s.kind = BaselineKind::kAlphaFair;
    s.alpha_fixed = cfg.alpha_high;
  } else if (m == "MinLatency") {
    s.kind = BaselineKind::kMinLatency;
    s.latency_rule = LatencyRule::kArgmax;
  } else if (m == "MinLatency-Argmin") {
    s.kind = BaselineKind::kMinLatency;
    s.latency_rule = LatencyRule::kArgmin;
  } else {
    throw ConfigError("not a pricing baseline: " + m);
  }
  return s;
}

namespace detail {

inline MethodOutcome outcome_from(const NetworkInstance& inst, std::string m,
                                  Solution s) {
  MethodOutcome o{std::move(m), std::move(s.association),
                  std::move(s.allocation), s.haf, {}, {}, {}};
  o.metrics = report(inst, o.association, o.allocation);
  return o;
}

inline MethodOutcome outcome_from(const NetworkInstance& inst, std::string m,
                                  PricingResult r) {
  MethodOutcome o{std::move(m), std::move(r.association),
                  std::move(r.allocation), r.haf, {}, r.trace.certificate,
                  std::move(r.trace)};
  o.metrics = report(inst, o.association, o.allocation);
  return o;
}

}  // namespace detail

/// Runs one named method on `inst`. `index` is the seed index, used to key
/// the randomized methods.
inline MethodOutcome run_method(const std::string& m,
                                const NetworkInstance& inst,
                                const ScenarioConfig& cfg,
                                std::uint64_t index) {
  if (m == "Proposed") {
    return detail::outcome_from(inst, m, solve(inst, cfg.pricing, cfg.ra));
  }
  if (is_pricing_method(m)) {
    return detail::outcome_from(
        inst, m, run_pricing_baseline(inst, pricing_spec(cfg, m), cfg.ra));
  }
  if (m == "Random") {
    return detail::outcome_from(
        inst, m,
        run_random(inst,
                   derive_seed(cfg.master_seed, index,
                               SeedPurpose::kRandomBaseline),
                   cfg.ra));
  }
  if (m == "MaxSinr") return detail::outcome_from(inst, m, run_max_sinr(inst, cfg.ra));
  if (m == "2RS") {
    return detail::outcome_from(
        inst, m,
        run_2rs(inst, max_sinr_association(inst), cfg.two_rs_max_passes,
                false, cfg.ra));
  }
  if (m == "GA") {
    return detail::outcome_from(
        inst, m,
        run_ga(inst, cfg.ga,
               derive_seed(cfg.master_seed, index, SeedPurpose::kGenetic),
               cfg.ra));
  }
  if (m == "BruteForce") {
    return detail::outcome_from(inst, m, brute_force(inst, cfg.ra));
  }
  throw ConfigError("unknown method '" + m + "'");
}

/// Calls `work(k)` for k in [0, n) on up to `threads` workers. The first
/// exception thrown by any worker is rethrown after all workers stop.
inline void parallel_for(std::size_t n, std::size_t threads,
                         const std::function<void(std::size_t)>& work) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t k = 0; k < n; ++k) work(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= n) return;
        try {
          work(k);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
          next.store(n);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct SeedResult {
  std::uint64_t index = 0;
  std::vector<MethodOutcome> outcomes;
};

struct StaticResult {
  std::vector<std::string> methods;
  /// Sorted by seed index.
  std::vector<SeedResult> seeds;

  /// Per-seed values of `f` for one method, in seed order.
  std::vector<double> column(
      const std::string& method,
      const std::function<double(const MethodOutcome&)>& f) const {
    const auto pos = std::find(methods.begin(), methods.end(), method);
    if (pos == methods.end()) {
      throw std::out_of_range("method not in result: " + method);
    }
    const auto k = static_cast<std::size_t>(pos - methods.begin());
    std::vector<double> out;
    out.reserve(seeds.size());
    for (const auto& s : seeds) out.push_back(f(s.outcomes[k]));
    return out;
  }
  std::vector<double> haf(const std::string& method) const {
    return column(method, [](const MethodOutcome& o) { return o.haf; });
  }
};

/// Runs every configured method on every seed. Traces are dropped unless
/// `keep_traces` is set.
inline StaticResult run_static(const ScenarioConfig& cfg,
                               std::size_t threads = 1,
                               bool keep_traces = false) {
  cfg.validate();
  StaticResult res;
  res.methods = cfg.methods;
  res.seeds.resize(cfg.num_seeds);
  parallel_for(cfg.num_seeds, threads, [&](std::size_t k) {
    const NetworkInstance inst = build_instance(cfg, k);
    SeedResult& sr = res.seeds[k];
    sr.index = k;
    for (const auto& m : cfg.methods) {
      MethodOutcome o = run_method(m, inst, cfg, k);
      if (!keep_traces) o.trace.reset();
      sr.outcomes.push_back(std::move(o));
    }
  });
  return res;
}

// ---------------------------------------------------------------------------
// Output

/// Creates `dir` if needed and checks it is writable. Called before any
/// computation so a bad path fails fast.
inline void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
  const auto probe = dir / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw IoError("output directory not writable: " + dir.string());
  }
  std::filesystem::remove(probe, ec);
}

struct ManifestEntry {
  std::string file;
  std::string description;
  std::size_t rows = 0;
};

class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& file, const csv::Table& t,
             const std::string& description) {
    try {
      t.write((dir_ / file).string());
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
    entries_.push_back({file, description, t.size()});
  }

  void write_manifest(const ScenarioConfig& cfg, const std::string& verb) {
    csv::Table t({"file", "rows", "description"});
    for (const auto& e : entries_) {
      t.push(csv::Row().add(e.file).add(e.rows).add(e.description));
    }
    t.push(csv::Row().add("config.ini").add(0).add("effective configuration"));
    write("manifest.csv", t, "list of outputs of '" + verb + "'");
    std::ofstream f(dir_ / "config.ini", std::ios::binary);
    f << serialize(cfg);
    if (!f) throw IoError("cannot write config.ini");
  }

  const std::vector<ManifestEntry>& entries() const { return entries_; }
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<ManifestEntry> entries_;
};

namespace detail {

inline const std::vector<std::string>& group_labels() {
  static const std::vector<std::string> labels = {"A1", "A2", "A3", "A4"};
  return labels;
}

inline csv::Row& add_optional(csv::Row& r, std::optional<double> v) {
  return v ? r.add(*v) : r.add("");
}

inline std::optional<double> mean_of_present(
    const std::vector<std::optional<double>>& v) {
  std::vector<double> present;
  for (const auto& x : v) {
    if (x) present.push_back(*x);
  }
  if (present.empty()) return {};
  return stats::mean(present);
}

}  // namespace detail

inline csv::Table per_seed_table(const StaticResult& res) {
  std::vector<std::string> header = {"seed", "method", "haf"};
  for (const auto& g : detail::group_labels()) header.push_back("haf_" + g);
  for (const char* c : {"sum_rate_bps", "pf", "avg_latency", "min_rate",
                        "theorem2_bound", "empirical_gap"}) {
    header.emplace_back(c);
  }
  csv::Table t(header);
  for (const auto& s : res.seeds) {
    for (const auto& o : s.outcomes) {
      csv::Row r;
      r.add(s.index).add(o.method).add(o.haf);
      for (const auto& g : o.metrics.by_group) r.add(g.haf);
      r.add(o.metrics.overall.sum_rate)
          .add(o.metrics.overall.pf)
          .add(o.metrics.overall.avg_latency)
          .add(o.metrics.overall.min_rate);
      detail::add_optional(r, o.certificate
                                  ? std::optional(o.certificate->theorem2_bound)
                                  : std::nullopt);
      detail::add_optional(r, o.certificate
                                  ? std::optional(o.certificate->empirical_gap)
                                  : std::nullopt);
      t.push(r);
    }
  }
  return t;
}

/// Table of mean HAF per method, overall and per group.
inline csv::Table summary_haf_table(const StaticResult& res) {
  std::vector<std::string> header = {"method", "seeds", "haf_mean", "haf_sd",
                                     "haf_ci95"};
  for (const auto& g : detail::group_labels()) {
    header.push_back("haf_" + g + "_mean");
    header.push_back("haf_" + g + "_sd");
  }
  header.emplace_back("theorem2_bound_mean");
  header.emplace_back("empirical_gap_mean");
  csv::Table t(header);
  for (std::size_t k = 0; k < res.methods.size(); ++k) {
    const std::string& m = res.methods[k];
    const auto h = res.haf(m);
    csv::Row r;
    r.add(m).add(res.seeds.size()).add(stats::mean(h)).add(stats::stddev(h))
        .add(stats::ci95(h));
    for (std::size_t g = 0; g < kNumGroups; ++g) {
      const auto hg = res.column(m, [g](const MethodOutcome& o) {
        return o.metrics.by_group[g].haf;
      });
      r.add(stats::mean(hg)).add(stats::stddev(hg));
    }
    std::vector<std::optional<double>> bound, gap;
    for (const auto& s : res.seeds) {
      const auto& c = s.outcomes[k].certificate;
      bound.push_back(c ? std::optional(c->theorem2_bound) : std::nullopt);
      gap.push_back(c ? std::optional(c->empirical_gap) : std::nullopt);
    }
    detail::add_optional(r, detail::mean_of_present(bound));
    detail::add_optional(r, detail::mean_of_present(gap));
    t.push(r);
  }
  return t;
}

/// Group-wise sum-rate, PF, latency and min-rate per method.
inline csv::Table summary_metrics_table(const StaticResult& res) {
  csv::Table t({"method", "group", "seeds", "sum_rate_bps_mean",
                "sum_rate_bps_sd", "pf_mean", "pf_sd", "avg_latency_mean",
                "avg_latency_sd", "min_rate_mean", "min_rate_sd"});
  for (const auto& m : res.methods) {
    for (std::size_t g = 0; g <= kNumGroups; ++g) {
      auto stat = [&](auto field) {
        return res.column(m, [&](const MethodOutcome& o) {
          const GroupStats& s =
              g < kNumGroups ? o.metrics.by_group[g] : o.metrics.overall;
          return field(s);
        });
      };
      const auto sr = stat([](const GroupStats& s) { return s.sum_rate; });
      const auto pf = stat([](const GroupStats& s) { return s.pf; });
      const auto lat = stat([](const GroupStats& s) { return s.avg_latency; });
      const auto mr = stat([](const GroupStats& s) { return s.min_rate; });
      csv::Row r;
      r.add(m)
          .add(g < kNumGroups ? detail::group_labels()[g] : std::string("all"))
          .add(res.seeds.size());
      for (const auto* v : {&sr, &pf, &lat, &mr}) {
        r.add(stats::mean(*v)).add(stats::stddev(*v));
      }
      t.push(r);
    }
  }
  return t;
}

/// Runs the static experiment and writes per_seed.csv, summary_haf.csv,
/// summary_metrics.csv and manifest.csv into `out_dir`.
inline StaticResult run_static_experiment(const ScenarioConfig& cfg,
                                          const std::filesystem::path& out_dir,
                                          std::size_t threads = 1) {
  cfg.validate();
  prepare_output_dir(out_dir);
  StaticResult res = run_static(cfg, threads);
  OutputSet out(out_dir);
  out.write("per_seed.csv", per_seed_table(res), "one row per (seed, method)");
  out.write("summary_haf.csv", summary_haf_table(res),
            "mean overall and group-wise HAF per method");
  out.write("summary_metrics.csv", summary_metrics_table(res),
            "group-wise sum-rate, PF, latency and min-rate per method");
  out.write_manifest(cfg, "static");
  return res;
}

// ---------------------------------------------------------------------------
// User-count sweep

struct SweepPoint {
  std::size_t users = 0;
  StaticResult result;
};

inline std::vector<SweepPoint> run_user_sweep(
    const ScenarioConfig& cfg, const std::vector<std::size_t>& users,
    const std::filesystem::path& out_dir, std::size_t threads = 1) {
  if (users.empty()) throw ConfigError("sweep: empty user list");
  std::vector<ScenarioConfig> cfgs;
  for (std::size_t n : users) {
    ScenarioConfig c = cfg;
    c.channel.num_users = n;
    c.validate();
    cfgs.push_back(std::move(c));
  }
  prepare_output_dir(out_dir);
  std::vector<SweepPoint> points;
  csv::Table t({"users", "method", "seeds", "haf_mean", "haf_sd", "haf_ci95"});
  for (std::size_t k = 0; k < users.size(); ++k) {
    SweepPoint p{users[k], run_static(cfgs[k], threads)};
    for (const auto& m : p.result.methods) {
      const auto h = p.result.haf(m);
      t.push(csv::Row()
                 .add(p.users)
                 .add(m)
                 .add(h.size())
                 .add(stats::mean(h))
                 .add(stats::stddev(h))
                 .add(stats::ci95(h)));
    }
    points.push_back(std::move(p));
  }
  OutputSet out(out_dir);
  out.write("sweep_haf.csv", t, "mean HAF per (user count, method)");
  out.write_manifest(cfg, "sweep");
  return points;
}

// ---------------------------------------------------------------------------
// Time-varying channels

/// Methods tracked over time. "Frozen" keeps Proposed's first-slot
/// association and only re-solves the bandwidth split.
inline std::vector<std::string> time_varying_methods(const ScenarioConfig& cfg) {
  std::vector<std::string> out = {"Proposed", "Frozen"};
  for (const auto& m : cfg.methods) {
    if (m == "Proposed" || m == "Random" || m == "GA" || m == "BruteForce") {
      continue;
    }
    out.push_back(m);
  }
  return out;
}

struct TimeVaryingResult {
  std::vector<std::string> methods;
  /// haf[seed][method][slot].
  std::vector<std::vector<std::vector<double>>> haf;

  /// Mean over slots of each seed for one method.
  std::vector<double> seed_means(const std::string& method) const {
    const auto pos = std::find(methods.begin(), methods.end(), method);
    if (pos == methods.end()) {
      throw std::out_of_range("method not in result: " + method);
    }
    const auto k = static_cast<std::size_t>(pos - methods.begin());
    std::vector<double> out;
    for (const auto& s : haf) out.push_back(stats::mean(s[k]));
    return out;
  }
};

/// Simulates one seed over `num_slots` slots.
inline std::vector<std::vector<double>> run_time_varying_seed(
    const ScenarioConfig& cfg, const std::vector<std::string>& methods,
    std::uint64_t index) {
  const TimeVaryingConfig& tv = *cfg.time_varying;
  SeedWorld w = build_world(cfg.channel, cfg.alpha_ratios, tv.rho,
                            cfg.master_seed, index, cfg.name);
  Rng evolution(derive_seed(cfg.master_seed, index,
                            SeedPurpose::kFadingEvolution));
  PricingConfig slot_pricing = cfg.pricing;
  slot_pricing.total_iters = tv.slot_iters;

  const std::size_t n = methods.size();
  std::vector<std::vector<double>> haf(n, std::vector<double>(tv.num_slots));
  std::vector<std::optional<PriceVector>> prices(n);
  std::vector<Association> assoc(n);

  for (std::size_t slot = 0; slot < tv.num_slots; ++slot) {
    if (slot > 0) w.fading = evolve_fading(w.fading, evolution);
    const NetworkInstance inst = world_instance(cfg.channel, w, slot);
    const PricingConfig& pc = slot == 0 ? cfg.pricing : slot_pricing;
    for (std::size_t k = 0; k < n; ++k) {
      const std::string& m = methods[k];
      if (m == "Frozen") {
        // Proposed always comes first, so its slot-0 association exists.
        if (slot == 0) assoc[k] = assoc[0];
        haf[k][slot] = evaluate(inst, assoc[k], cfg.ra).haf;
      } else if (m == "Proposed") {
        PricingResult r = solve(inst, pc, cfg.ra, prices[k]);
        prices[k] = r.trace.final_mu;
        assoc[k] = std::move(r.association);
        haf[k][slot] = r.haf;
      } else if (is_pricing_method(m)) {
        BaselineSpec spec = pricing_spec(cfg, m);
        spec.pricing = pc;
        PricingResult r = run_pricing_baseline(inst, spec, cfg.ra, prices[k]);
        prices[k] = r.trace.final_mu;
        haf[k][slot] = r.haf;
      } else if (m == "2RS") {
        Solution s =
            slot == 0
                ? run_2rs(inst, max_sinr_association(inst),
                          cfg.two_rs_max_passes, false, cfg.ra)
                : run_2rs(inst, assoc[k], 1, true, cfg.ra);
        assoc[k] = std::move(s.association);
        haf[k][slot] = s.haf;
      } else if (m == "MaxSinr") {
        haf[k][slot] = run_max_sinr(inst, cfg.ra).haf;
      } else {
        throw ConfigError("method not supported over time: " + m);
      }
    }
  }
  return haf;
}

inline TimeVaryingResult run_time_varying(const ScenarioConfig& cfg,
                                          std::size_t threads = 1) {
  cfg.validate();
  if (!cfg.time_varying) {
    throw ConfigError("time-varying run needs a [time_varying] section");
  }
  TimeVaryingResult res;
  res.methods = time_varying_methods(cfg);
  res.haf.resize(cfg.num_seeds);
  parallel_for(cfg.num_seeds, threads, [&](std::size_t k) {
    res.haf[k] = run_time_varying_seed(cfg, res.methods, k);
  });
  return res;
}

inline TimeVaryingResult run_time_varying_experiment(
    const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
    std::size_t threads = 1) {
  cfg.validate();
  if (!cfg.time_varying) {
    throw ConfigError("time-varying run needs a [time_varying] section");
  }
  prepare_output_dir(out_dir);
  TimeVaryingResult res = run_time_varying(cfg, threads);

  csv::Table slots({"seed", "slot", "method", "haf"});
  for (std::size_t s = 0; s < res.haf.size(); ++s) {
    for (std::size_t t = 0; t < cfg.time_varying->num_slots; ++t) {
      for (std::size_t k = 0; k < res.methods.size(); ++k) {
        slots.push(
            csv::Row().add(s).add(t + 1).add(res.methods[k]).add(res.haf[s][k][t]));
      }
    }
  }
  csv::Table per_slot({"slot", "method", "haf_mean", "haf_sd"});
  for (std::size_t t = 0; t < cfg.time_varying->num_slots; ++t) {
    for (std::size_t k = 0; k < res.methods.size(); ++k) {
      std::vector<double> v;
      for (const auto& s : res.haf) v.push_back(s[k][t]);
      per_slot.push(csv::Row()
                        .add(t + 1)
                        .add(res.methods[k])
                        .add(stats::mean(v))
                        .add(stats::stddev(v)));
    }
  }
  csv::Table summary({"method", "seeds", "haf_mean", "haf_sd", "haf_ci95"});
  for (const auto& m : res.methods) {
    const auto v = res.seed_means(m);
    summary.push(csv::Row()
                     .add(m)
                     .add(v.size())
                     .add(stats::mean(v))
                     .add(stats::stddev(v))
                     .add(stats::ci95(v)));
  }
  OutputSet out(out_dir);
  out.write("timevary_slots.csv", slots, "HAF per (seed, slot, method)");
  out.write("timevary_per_slot.csv", per_slot,
            "HAF per (slot, method) averaged over seeds");
  out.write("timevary_summary.csv", summary,
            "time-averaged HAF per method; sd and ci95 across seeds");
  out.write_manifest(cfg, "timevary");
  return res;
}

// ---------------------------------------------------------------------------
// Convergence traces

/// One row per iteration. `gap` is the best dual value so far minus the best
/// primal HAF so far; empty when the trace carries no dual values.
inline csv::Table emit_convergence_trace(const RunTrace& trace) {
  csv::Table t({"iter", "primal_haf", "dual_value", "gap"});
  double best_primal = -std::numeric_limits<double>::infinity();
  std::optional<double> best_dual;
  for (const auto& r : trace.iterations) {
    best_primal = std::max(best_primal, r.primal_haf);
    if (r.dual_value && (!best_dual || *r.dual_value < *best_dual)) {
      best_dual = r.dual_value;
    }
    csv::Row row;
    row.add(r.iter).add(r.primal_haf);
    detail::add_optional(row, r.dual_value);
    detail::add_optional(
        row, best_dual ? std::optional(*best_dual - best_primal) : std::nullopt);
    t.push(row);
  }
  return t;
}

/// Writes the Proposed trace of seed `index` (and the primal traces of any
/// pricing baselines in the method list) to `out_dir`.
inline std::vector<MethodOutcome> run_convergence(
    const ScenarioConfig& cfg, std::uint64_t index,
    const std::filesystem::path& out_dir) {
  cfg.validate();
  prepare_output_dir(out_dir);
  const NetworkInstance inst = build_instance(cfg, index);
  std::vector<MethodOutcome> outs;
  outs.push_back(run_method("Proposed", inst, cfg, index));
  for (const auto& m : cfg.methods) {
    if (m != "Proposed" && is_pricing_method(m)) {
      outs.push_back(run_method(m, inst, cfg, index));
    }
  }

  OutputSet out(out_dir);
  const MethodOutcome& prop = outs.front();
  out.write("convergence.csv", emit_convergence_trace(*prop.trace),
            "Proposed primal HAF, dual value and gap per iteration");
  csv::Table cert({"seed", "haf", "theorem2_bound", "empirical_gap"});
  cert.push(csv::Row()
                .add(index)
                .add(prop.haf)
                .add(prop.certificate->theorem2_bound)
                .add(prop.certificate->empirical_gap));
  out.write("convergence_certificate.csv", cert,
            "gap certificate of the Proposed run");
  csv::Table base({"iter", "method", "primal_haf"});
  for (std::size_t k = 1; k < outs.size(); ++k) {
    for (const auto& r : outs[k].trace->iterations) {
      base.push(csv::Row().add(r.iter).add(outs[k].method).add(r.primal_haf));
    }
  }
  out.write("convergence_baselines.csv", base,
            "primal HAF per iteration of the pricing baselines");
  out.write_manifest(cfg, "converge");
  return outs;
}

// ---------------------------------------------------------------------------
// Brute-force cross-check

struct OracleCase {
  std::uint64_t index = 0;
  double proposed_haf = 0.0;
  double optimum_haf = 0.0;
  double theorem2_bound = 0.0;
  /// proposed >= optimum - bound - 1e-6.
  bool within_bound = false;
  /// optimum - proposed <= 1% of |optimum|.
  bool within_1pct = false;
};

struct OracleResult {
  std::vector<OracleCase> cases;

  std::size_t bound_failures() const {
    return static_cast<std::size_t>(std::count_if(
        cases.begin(), cases.end(),
        [](const OracleCase& c) { return !c.within_bound; }));
  }
  double fraction_within_1pct() const {
    if (cases.empty()) return 0.0;
    const auto n = std::count_if(cases.begin(), cases.end(),
                                 [](const OracleCase& c) { return c.within_1pct; });
    return static_cast<double>(n) / static_cast<double>(cases.size());
  }
};

/// Compares Proposed with exhaustive search on `instances` small instances
/// of `users` x `bs` drawn from the scenario's channel model. The size
/// override bypasses the reference-table ranges on purpose.
inline OracleResult run_oracle(const ScenarioConfig& cfg,
                               std::size_t instances, std::size_t users,
                               std::size_t bs, std::size_t threads = 1) {
  ScenarioConfig c = cfg;
  c.channel.num_users = users;
  c.channel.num_bs = bs;
  c.force = true;
  c.validate();
  OracleResult res;
  res.cases.resize(instances);
  parallel_for(instances, threads, [&](std::size_t k) {
    const NetworkInstance inst = build_instance(c, k);
    const PricingResult p = solve(inst, c.pricing, c.ra);
    const Solution bf = brute_force(inst, c.ra);
    OracleCase& oc = res.cases[k];
    oc.index = k;
    oc.proposed_haf = p.haf;
    oc.optimum_haf = bf.haf;
    oc.theorem2_bound = p.trace.certificate->theorem2_bound;
    oc.within_bound = p.haf >= bf.haf - oc.theorem2_bound - 1e-6;
    oc.within_1pct = bf.haf - p.haf <= 0.01 * std::abs(bf.haf);
  });
  return res;
}

inline OracleResult run_oracle_experiment(const ScenarioConfig& cfg,
                                          std::size_t instances,
                                          std::size_t users, std::size_t bs,
                                          const std::filesystem::path& out_dir,
                                          std::size_t threads = 1) {
  prepare_output_dir(out_dir);
  OracleResult res = run_oracle(cfg, instances, users, bs, threads);
  csv::Table t({"seed", "proposed_haf", "optimum_haf", "theorem2_bound",
                "within_bound", "within_1pct"});
  for (const auto& c : res.cases) {
    t.push(csv::Row()
               .add(c.index)
               .add(c.proposed_haf)
               .add(c.optimum_haf)
               .add(c.theorem2_bound)
               .add(static_cast<int>(c.within_bound))
               .add(static_cast<int>(c.within_1pct)));
  }
  OutputSet out(out_dir);
  out.write("oracle.csv", t, "Proposed vs exhaustive search per instance");
  out.write_manifest(cfg, "oracle");
  return res;
}

}  // namespace hetfair
