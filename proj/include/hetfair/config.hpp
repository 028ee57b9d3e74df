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

// Scenario configuration and its INI representation.
//
// Every key is optional; missing keys keep their defaults. Unknown sections
// or keys are rejected so that typos do not silently fall back to defaults.
// serialize() writes every field, and parse_config(serialize(c)) == c.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hetfair/baselines.hpp"
#include "hetfair/channel.hpp"
#include "hetfair/pricing.hpp"
#include "hetfair/ra.hpp"

namespace hetfair {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using AlphaRatios = std::array<double, kNumGroups>;

inline constexpr AlphaRatios kLowRatios = {0.25, 0.25, 0.25, 0.25};
inline constexpr AlphaRatios kHighRatios = {0.125, 0.125, 0.375, 0.375};

struct TimeVaryingConfig {
  double rho = 0.9;
  std::size_t num_slots = 200;
  /// Warm-started pricing iterations per slot after the first.
  std::size_t slot_iters = 10;

  bool operator==(const TimeVaryingConfig&) const = default;
};

/// Method names understood by the experiment runner.
inline const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> names = {
      "Proposed", "Random",      "MaxSinr",    "PF",
      "AF-Low",   "AF-High",     "MinLatency", "MinLatency-Argmin",
      "2RS",      "GA",          "BruteForce"};
  return names;
}

inline std::vector<std::string> default_methods() {
  return {"Proposed", "Random",     "MaxSinr",           "PF", "AF-Low",
          "AF-High",  "MinLatency", "MinLatency-Argmin", "2RS", "GA"};
}

struct ScenarioConfig {
  std::string name = "low";
  ChannelParams channel;
  AlphaRatios alpha_ratios = kLowRatios;
  std::size_t num_seeds = 1000;
  std::uint64_t master_seed = 42;
  PricingConfig pricing;
  LambdaSearchConfig ra;
  std::optional<TimeVaryingConfig> time_varying;
  std::vector<std::string> methods = default_methods();
  GaParams ga;
  std::size_t two_rs_max_passes = 100;
  double alpha_low = 0.6;
  double alpha_high = 1.6;
  /// Skips the reference-table range checks.
  bool force = false;

  /// Structural checks always; reference-table ranges unless `force`.
  void validate() const;

  bool operator==(const ScenarioConfig&) const = default;
};

inline ScenarioConfig low_scenario() { return {}; }

inline ScenarioConfig high_scenario() {
  ScenarioConfig c;
  c.name = "high";
  c.alpha_ratios = kHighRatios;
  return c;
}

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

inline bool near(double a, double b) { return std::abs(a - b) <= 1e-9; }

}  // namespace detail

inline void ScenarioConfig::validate() const {
  using detail::require;
  try {
    channel.validate();
    pricing.validate();
    ra.validate();
    ga.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  double sum = 0.0;
  for (double r : alpha_ratios) {
    require(r >= 0.0 && std::isfinite(r), "alpha_ratios must be >= 0");
    sum += r;
  }
  require(std::abs(sum - 1.0) <= 1e-9, "alpha_ratios must sum to 1");
  require(num_seeds >= 1, "num_seeds must be >= 1");
  require(alpha_low > 0.0 && alpha_low != 1.0, "alpha_low must be > 0, != 1");
  require(alpha_high > 0.0 && alpha_high != 1.0,
          "alpha_high must be > 0, != 1");
  if (time_varying) {
    require(time_varying->rho > 0.0 && time_varying->rho <= 1.0,
            "time_varying.rho must be in (0, 1]");
    require(time_varying->num_slots >= 1, "time_varying.num_slots must be >= 1");
    require(time_varying->slot_iters >= 1,
            "time_varying.slot_iters must be >= 1");
  }
  require(!methods.empty(), "methods list is empty");
  for (const auto& m : methods) {
    bool found = false;
    for (const auto& k : known_methods()) found = found || k == m;
    require(found, "unknown method '" + m + "'");
  }

  if (force) return;
  const std::string hint = " (set scenario.force = true to override)";
  require(channel.num_bs == 6, "num_bs must be 6" + hint);
  require(channel.num_users >= 40 && channel.num_users <= 60,
          "num_users must be in [40, 60]" + hint);
  require(detail::near(channel.bandwidth_mhz, 20.0),
          "bandwidth_mhz must be 20" + hint);
  require(channel.small_power.min_dbm >= 23.0 &&
              channel.macro_power.max_dbm <= 36.0 &&
              channel.small_power.max_dbm <= 36.0 &&
              channel.macro_power.min_dbm >= 23.0,
          "transmit powers must lie in [23, 36] dBm" + hint);
  require(detail::near(channel.cell_size_m, 250.0),
          "cell_size_m must be 250" + hint);
  require(detail::near(channel.noise_dbm_hz, -174.0),
          "noise_dbm_hz must be -174" + hint);
  require(detail::near(channel.indoor_prob, 0.5),
          "indoor_prob must be 0.5" + hint);
}

namespace detail {

inline std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out += ',';
    out += v[k];
  }
  return out;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    cur.clear();
  };
  for (char c : s) {
    if (c == ',') {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

inline double to_double(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (s.find_first_not_of(" \t", pos) != std::string::npos) throw 0;
    return v;
  } catch (...) {
    throw ConfigError(key + ": not a number: '" + s + "'");
  }
}

inline std::uint64_t to_uint(const std::string& key, const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError(key + ": not a non-negative integer: '" + s + "'");
  }
  try {
    return std::stoull(s);
  } catch (...) {
    throw ConfigError(key + ": out of range: '" + s + "'");
  }
}

inline bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key + ": not a boolean: '" + s + "'");
}

/// Applies `section.key = value` to `c`; returns false for unknown keys.
class KeyTable {
 public:
  using Setter = std::function<void(ScenarioConfig&, const std::string&,
                                    const std::string&)>;

  void add(const std::string& key, Setter s) { setters_[key] = std::move(s); }
  bool has_section(const std::string& section) const {
    const std::string prefix = section + ".";
    for (const auto& [k, _] : setters_) {
      if (k.rfind(prefix, 0) == 0) return true;
    }
    return false;
  }
  bool apply(ScenarioConfig& c, const std::string& key,
             const std::string& value) const {
    auto it = setters_.find(key);
    if (it == setters_.end()) return false;
    it->second(c, key, value);
    return true;
  }

 private:
  std::map<std::string, Setter> setters_;
};

inline std::array<double, 2> pair_of(const std::string& key,
                                     const std::string& s) {
  const auto parts = split_list(s);
  if (parts.size() != 2) throw ConfigError(key + ": expected 'min,max'");
  return {to_double(key, parts[0]), to_double(key, parts[1])};
}

inline const KeyTable& key_table() {
  static const KeyTable table = [] {
    KeyTable t;
    using C = ScenarioConfig;
    using S = const std::string&;
#define HF_DOUBLE(key, field) \
  t.add(key, [](C& c, S k, S v) { c.field = to_double(k, v); })
#define HF_SIZE(key, field) \
  t.add(key, [](C& c, S k, S v) { c.field = to_uint(k, v); })

    t.add("scenario.name", [](C& c, S, S v) { c.name = v; });
    HF_SIZE("scenario.num_users", channel.num_users);
    HF_SIZE("scenario.num_bs", channel.num_bs);
    HF_SIZE("scenario.num_seeds", num_seeds);
    HF_SIZE("scenario.master_seed", master_seed);
    t.add("scenario.alpha_ratios", [](C& c, S k, S v) {
      const auto parts = split_list(v);
      if (parts.size() == 1 && parts[0] == "low") {
        c.alpha_ratios = kLowRatios;
        return;
      }
      if (parts.size() == 1 && parts[0] == "high") {
        c.alpha_ratios = kHighRatios;
        return;
      }
      if (parts.size() != kNumGroups) {
        throw ConfigError(k + ": expected 4 values, 'low' or 'high'");
      }
      for (std::size_t g = 0; g < kNumGroups; ++g) {
        c.alpha_ratios[g] = to_double(k, parts[g]);
      }
    });
    t.add("scenario.force",
          [](C& c, S k, S v) { c.force = to_bool(k, v); });

    HF_DOUBLE("channel.bandwidth_mhz", channel.bandwidth_mhz);
    HF_DOUBLE("channel.cell_size_m", channel.cell_size_m);
    HF_DOUBLE("channel.noise_dbm_hz", channel.noise_dbm_hz);
    HF_DOUBLE("channel.indoor_prob", channel.indoor_prob);
    HF_DOUBLE("channel.macro_fraction", channel.macro_fraction);
    t.add("channel.macro_power_dbm", [](C& c, S k, S v) {
      const auto p = pair_of(k, v);
      c.channel.macro_power = {p[0], p[1]};
    });
    t.add("channel.small_power_dbm", [](C& c, S k, S v) {
      const auto p = pair_of(k, v);
      c.channel.small_power = {p[0], p[1]};
    });
    HF_DOUBLE("channel.carrier_ghz", channel.carrier_ghz);
    HF_DOUBLE("channel.macro_exponent", channel.macro_exponent);
    HF_DOUBLE("channel.small_exponent", channel.small_exponent);
    HF_DOUBLE("channel.shadowing_db", channel.shadowing_db);
    HF_DOUBLE("channel.indoor_loss_db", channel.indoor_loss_db);
    HF_SIZE("channel.num_clusters", channel.num_clusters);
    HF_DOUBLE("channel.cluster_radius_m", channel.cluster_radius_m);

    HF_SIZE("pricing.total_iters", pricing.total_iters);
    HF_DOUBLE("pricing.eta0", pricing.eta0);
    t.add("pricing.schedule", [](C& c, S k, S v) {
      if (v == "diminishing") {
        c.pricing.schedule = StepSchedule::kDiminishing;
      } else if (v == "constant") {
        c.pricing.schedule = StepSchedule::kConstant;
      } else {
        throw ConfigError(k + ": expected 'diminishing' or 'constant'");
      }
    });
    HF_DOUBLE("pricing.mu_init", pricing.mu_init);
    HF_DOUBLE("pricing.mu_min", pricing.mu_min);

    t.add("ra.method", [](C& c, S k, S v) {
      if (v == "bisection") {
        c.ra.method = LambdaMethod::kBisection;
      } else if (v == "digit") {
        c.ra.method = LambdaMethod::kDigitSearch;
      } else {
        throw ConfigError(k + ": expected 'bisection' or 'digit'");
      }
    });
    HF_DOUBLE("ra.initial_step", ra.initial_step);
    HF_SIZE("ra.outer_iters", ra.outer_iters);
    HF_SIZE("ra.inner_iters", ra.inner_iters);
    HF_DOUBLE("ra.bisect_tol", ra.bisect_tol);

    t.add("time_varying.enabled", [](C& c, S k, S v) {
      if (to_bool(k, v)) {
        if (!c.time_varying) c.time_varying.emplace();
      } else {
        c.time_varying.reset();
      }
    });
    auto tv = [](C& c) -> TimeVaryingConfig& {
      if (!c.time_varying) c.time_varying.emplace();
      return *c.time_varying;
    };
    t.add("time_varying.rho",
          [tv](C& c, S k, S v) { tv(c).rho = to_double(k, v); });
    t.add("time_varying.num_slots",
          [tv](C& c, S k, S v) { tv(c).num_slots = to_uint(k, v); });
    t.add("time_varying.slot_iters",
          [tv](C& c, S k, S v) { tv(c).slot_iters = to_uint(k, v); });

    t.add("methods.list",
          [](C& c, S, S v) { c.methods = split_list(v); });
    HF_DOUBLE("methods.alpha_low", alpha_low);
    HF_DOUBLE("methods.alpha_high", alpha_high);

    HF_SIZE("ga.population", ga.population);
    HF_SIZE("ga.parents", ga.parents);
    HF_DOUBLE("ga.mutation_prob", ga.mutation_prob);
    HF_SIZE("ga.max_generations", ga.max_generations);

    HF_SIZE("two_rs.max_passes", two_rs_max_passes);
#undef HF_DOUBLE
#undef HF_SIZE
    return t;
  }();
  return table;
}

}  // namespace detail

/// Parses INI text. Structural and range validation runs afterwards.
inline ScenarioConfig parse_config(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  ScenarioConfig c;
  const auto& table = detail::key_table();
  // The time_varying section toggles the optional block; apply `enabled`
  // first so later keys see the right state.
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("key '" + section + "' is outside any section");
    }
    if (!table.has_section(section)) {
      throw ConfigError("unknown section [" + section + "]");
    }
    if (auto en = body.get_optional<std::string>("enabled")) {
      table.apply(c, section + ".enabled", *en);
    }
    for (const auto& [key, value] : body) {
      if (key == "enabled") continue;
      if (section == "time_varying" && !c.time_varying &&
          body.get_optional<std::string>("enabled")) {
        throw ConfigError("time_varying." + key + " set while enabled = false");
      }
      if (!table.apply(c, section + "." + key, value.data())) {
        throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      }
    }
  }
  c.validate();
  return c;
}

inline ScenarioConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  return parse_config(in);
}

inline std::string serialize(const ScenarioConfig& c) {
  using detail::exact;
  std::ostringstream os;
  auto kv = [&](const char* k, const std::string& v) {
    os << k << " = " << v << '\n';
  };
  auto num = [&](const char* k, double v) { kv(k, exact(v)); };
  auto cnt = [&](const char* k, std::uint64_t v) { kv(k, std::to_string(v)); };

  os << "[scenario]\n";
  kv("name", c.name);
  cnt("num_users", c.channel.num_users);
  cnt("num_bs", c.channel.num_bs);
  cnt("num_seeds", c.num_seeds);
  cnt("master_seed", c.master_seed);
  kv("alpha_ratios", exact(c.alpha_ratios[0]) + "," + exact(c.alpha_ratios[1]) +
                         "," + exact(c.alpha_ratios[2]) + "," +
                         exact(c.alpha_ratios[3]));
  kv("force", c.force ? "true" : "false");

  const ChannelParams& p = c.channel;
  os << "\n[channel]\n";
  num("bandwidth_mhz", p.bandwidth_mhz);
  num("cell_size_m", p.cell_size_m);
  num("noise_dbm_hz", p.noise_dbm_hz);
  num("indoor_prob", p.indoor_prob);
  num("macro_fraction", p.macro_fraction);
  kv("macro_power_dbm",
     exact(p.macro_power.min_dbm) + "," + exact(p.macro_power.max_dbm));
  kv("small_power_dbm",
     exact(p.small_power.min_dbm) + "," + exact(p.small_power.max_dbm));
  num("carrier_ghz", p.carrier_ghz);
  num("macro_exponent", p.macro_exponent);
  num("small_exponent", p.small_exponent);
  num("shadowing_db", p.shadowing_db);
  num("indoor_loss_db", p.indoor_loss_db);
  cnt("num_clusters", p.num_clusters);
  num("cluster_radius_m", p.cluster_radius_m);

  os << "\n[pricing]\n";
  cnt("total_iters", c.pricing.total_iters);
  num("eta0", c.pricing.eta0);
  kv("schedule", c.pricing.schedule == StepSchedule::kDiminishing
                     ? "diminishing"
                     : "constant");
  num("mu_init", c.pricing.mu_init);
  num("mu_min", c.pricing.mu_min);

  os << "\n[ra]\n";
  kv("method", c.ra.method == LambdaMethod::kBisection ? "bisection" : "digit");
  num("initial_step", c.ra.initial_step);
  cnt("outer_iters", c.ra.outer_iters);
  cnt("inner_iters", c.ra.inner_iters);
  num("bisect_tol", c.ra.bisect_tol);

  os << "\n[time_varying]\n";
  kv("enabled", c.time_varying ? "true" : "false");
  if (c.time_varying) {
    num("rho", c.time_varying->rho);
    cnt("num_slots", c.time_varying->num_slots);
    cnt("slot_iters", c.time_varying->slot_iters);
  }

  os << "\n[methods]\n";
  kv("list", detail::join(c.methods));
  num("alpha_low", c.alpha_low);
  num("alpha_high", c.alpha_high);

  os << "\n[ga]\n";
  cnt("population", c.ga.population);
  cnt("parents", c.ga.parents);
  num("mutation_prob", c.ga.mutation_prob);
  cnt("max_generations", c.ga.max_generations);

  os << "\n[two_rs]\n";
  cnt("max_passes", c.two_rs_max_passes);
  return os.str();
}

}  // namespace hetfair
