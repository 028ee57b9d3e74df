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

#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace hetfair {

using Rng = std::mt19937_64;

/// What a derived seed is used for. Each purpose gets an independent stream
/// so that adding a method never perturbs the channel draws.
enum class SeedPurpose : std::uint64_t {
  kTopology = 1,
  kAlphas = 2,
  kFading = 3,
  kFadingEvolution = 4,
  kRandomBaseline = 5,
  kGenetic = 6,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based child seed for (master, seed index, purpose).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                 SeedPurpose purpose) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ index);
  return splitmix64(s ^ static_cast<std::uint64_t>(purpose));
}

// std::uniform_real_distribution is implementation-defined; these keep the
// draws identical across standard libraries.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  // Modulo bias is below 2^-50 for the index ranges used here.
  return rng() % n;
}

/// Standard normal via Box-Muller.
inline double standard_normal(Rng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace hetfair
