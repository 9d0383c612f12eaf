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
#include <istream>
#include <map>
#include <variant>

namespace vlmc {

/// Bi-infinite i.i.d. uniform sequence addressed by time index.
///
/// The counter form derives u_i by hashing (seed, i), so any index can be
/// read in O(1) and in any order, which is what lets every backward search
/// and every auxiliary process share one realization. A fixed trace serves
/// hand-built values and rejects indices it does not cover.
class UniformSource {
 public:
  static UniformSource counter(std::uint64_t seed);
  /// Throws InvalidArgument if a value lies outside [0, 1).
  static UniformSource fixed_trace(std::map<std::int64_t, double> values);

  /// u_i in [0, 1); throws IndexNotCovered for a trace without index i.
  double operator()(std::int64_t i) const;
  bool covers(std::int64_t i) const;

  bool is_trace() const { return std::holds_alternative<Trace>(state_); }
  std::uint64_t seed() const;

 private:
  struct Counter {
    std::uint64_t seed;
    std::uint64_t key;
  };
  using Trace = std::map<std::int64_t, double>;

  explicit UniformSource(std::variant<Counter, Trace> state) : state_(std::move(state)) {}

  std::variant<Counter, Trace> state_;
};

/// Seed of the `stream`-th independent source derived from `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Reads "index,value" rows; a header line and '#' comments are skipped.
UniformSource load_trace_csv(std::istream& in);

}  // namespace vlmc
