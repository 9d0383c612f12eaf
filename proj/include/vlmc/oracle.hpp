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
#include <functional>
#include <map>
#include <vector>

#include "vlmc/model.hpp"

namespace vlmc {

/// Renewal chain given by p_i = probability of the renewal symbol after the
/// renewal symbol followed by i other symbols.
struct RenewalSpec {
  std::function<double(std::uint64_t)> p;
  /// Lower bound of p_i beyond any truncation point; bounds the remainder.
  double tail_floor = 0.0;
};

/// Reads p_i off a two-symbol model whose reference string is one symbol
/// and whose length function is zero.
RenewalSpec renewal_spec(const ContextTreeModel& model);

struct RenewalMarginal {
  double value = 0.0;      // 1 / E[T] from the truncated sum
  double remainder = 0.0;  // value minus the smallest value compatible with the tail
  std::uint64_t truncation = 0;
};

/// Stationary probability of the renewal symbol, 1 / E[T] with
/// E[T] = sum_k prod_{i<k} (1 - p_i), summed up to `truncation` terms.
RenewalMarginal renewal_stationary_marginal(const RenewalSpec& spec, std::uint64_t truncation);

struct ChiSquareReport {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
  double level = 0.99;
  bool passed = true;
  std::vector<double> observed;  // after pooling
  std::vector<double> expected;
};

/// Pearson test of counts against probabilities. Neighbouring bins are pooled
/// left to right until each expected count reaches 5. Passes when the
/// p-value is at least 1 - level.
ChiSquareReport chi_square_test(const std::vector<std::uint64_t>& observed, const std::vector<double>& probabilities,
                                double level = 0.99);

/// Goodness of fit of samples on {0, 1, ...} against P(k) = p (1-p)^k.
ChiSquareReport geometric_test(const std::vector<std::uint64_t>& samples, double p, double level = 0.99);

/// Exact law of the perfectly simulated window X_1 .. X_length, computed by
/// enumerating the backward-forward sampler over a grid of `grid` equal
/// cells per uniform, with the search cut at `depth` sites before the window.
struct WindowLaw {
  std::size_t length = 0;
  std::uint64_t grid = 0;
  std::uint64_t depth = 0;
  std::map<Word, double, WordLess> law;
  /// Mass of the runs that need more than `depth` sites of past.
  double unresolved = 0.0;
  /// Resolved plus unresolved integer mass equals the full grid mass.
  bool balanced = false;
  std::uint64_t paths = 0;
};

/// Throws InvalidArgument unless every partition endpoint lies on the grid
/// and grid^(length + depth) fits in 128 bits.
WindowLaw brute_force_window_law(const ContextTreeModel& model, std::size_t length, std::uint64_t grid,
                                 std::uint64_t depth);

}  // namespace vlmc
