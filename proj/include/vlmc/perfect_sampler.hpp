/*
 * Copyright (C) 2026 The vlmc-cftp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vlmc/partition.hpp"
#include "vlmc/uniform_source.hpp"

namespace vlmc {

inline constexpr std::uint64_t kDefaultMaxBack = 10'000'000;

/// How a constructed symbol was obtained.
struct Provenance {
  bool spontaneous = false;
  /// Length of the context that decided the symbol; 0 when spontaneous.
  std::size_t context_length = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Output of a perfect simulation of the window [m, n].
struct SimulationResult {
  std::int64_t theta = 0;  // regeneration time of the window, theta <= m
  std::int64_t m = 0;
  std::int64_t n = 0;
  Word sample;  // X_theta .. X_n
  std::uint64_t steps = 0;
  std::vector<Provenance> provenance;  // parallel to sample

  Symbol at(std::int64_t i) const { return sample.at(static_cast<std::size_t>(i - theta)); }
  /// X_m .. X_n
  WordView window() const { return WordView(sample).subspan(static_cast<std::size_t>(m - theta)); }
};

/// Result of one greedy construction attempt over [first, last].
struct ConstructibilityWitness {
  std::int64_t first = 0;
  std::int64_t last = 0;
  bool constructible = false;
  Word word;  // the constructed prefix; the whole window on success
  std::int64_t failed_at = 0;  // index of the first star outcome on failure

  explicit operator bool() const { return constructible; }
};

/// Runs the update function left to right over [k, n] from an empty past.
/// Since the update function is deterministic at most one string can be
/// built, so this single pass decides constructibility.
ConstructibilityWitness constructible(const UniformSource& u, std::int64_t k, std::int64_t n, const UpdateFunction& f);

/// Largest k <= m from which [k, n] is constructible, or nullopt when none
/// is found with m - k <= max_back.
std::optional<std::int64_t> regeneration_time(const UniformSource& u, std::int64_t m, std::int64_t n,
                                              const UpdateFunction& f, std::uint64_t max_back = kDefaultMaxBack);

/// Definition-level sampler: walks k back from m testing constructibility of
/// [k, n], then replays the update function forward from the regeneration
/// time. Steps count backward moves plus constructed symbols.
std::optional<SimulationResult> simulate_by_definition(const UniformSource& u, std::int64_t m, std::int64_t n,
                                                       const UpdateFunction& f,
                                                       std::uint64_t max_back = kDefaultMaxBack);

/// Explicit backward-forward sampler. Tries [m, n] directly, then steps
/// back one index at a time, skipping indices whose uniform is not
/// spontaneous, and after each spontaneous index greedily builds the
/// smallest pending indices. Steps count backward moves plus constructed
/// symbols, so steps == (n - m + 1) + 2 (m - theta).
std::optional<SimulationResult> simulate_backward_forward(const UniformSource& u, std::int64_t m, std::int64_t n,
                                                          const UpdateFunction& f,
                                                          std::uint64_t max_back = kDefaultMaxBack);

/// A sample of the stationary chain over [m, n] (backward-forward sampler).
inline std::optional<SimulationResult> sample_stationary(const UniformSource& u, std::int64_t m, std::int64_t n,
                                                         const UpdateFunction& f,
                                                         std::uint64_t max_back = kDefaultMaxBack) {
  return simulate_backward_forward(u, m, n, f, max_back);
}

}  // namespace vlmc
