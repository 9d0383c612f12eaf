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

#include <optional>
#include <vector>

#include "vlmc/model.hpp"

namespace vlmc {

/// Half-open interval [lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double u) const { return lo <= u && u < hi; }
};

/// One row of the coupling partition of [0, 1).
///
/// The spontaneous block J(a|empty) = [(a-1) eps, a eps) is shared by every
/// row. A context row adds, from #E eps onwards, one block per symbol in
/// alphabet order: width p(a|v) - eps for regular a, p(a|v) otherwise. The
/// spontaneous row has no context block, so u >= #E eps maps to no symbol.
class PartitionRow {
 public:
  static PartitionRow spontaneous(const Alphabet& alphabet, double epsilon);
  /// Throws NegativeWidth if p(a|v) < eps for some regular a.
  static PartitionRow context(const Alphabet& alphabet, double epsilon, const ProbabilityVector& p);

  bool has_context_block() const { return !context_.empty(); }
  double spontaneous_mass() const { return spontaneous_mass_; }
  /// J(a|empty); empty interval for non-regular a.
  Interval spontaneous_interval(Symbol a) const;
  /// J(a|v); requires has_context_block().
  Interval context_interval(Symbol a) const { return context_.at(a.index); }
  /// Lebesgue measure of K(a|v) = J(a|empty) u J(a|v).
  double k_length(Symbol a) const;

  /// Symbol whose interval holds u, nullopt for the star outcome.
  std::optional<Symbol> locate(double u) const;

  /// Every interval of the row, spontaneous ones first.
  std::vector<Interval> intervals() const;

 private:
  std::size_t regular_count_ = 0;
  double epsilon_ = 0.0;
  double spontaneous_mass_ = 0.0;
  std::vector<Interval> context_;
  // block boundaries for the context region: breaks_[j] starts context_[j]
  std::vector<double> breaks_;
};

/// Builds the row for `context`; an empty context gives the spontaneous row.
PartitionRow build_partition(const ContextTreeModel& model, WordView context);

/// The update function: maps a uniform and the known part of the past to
/// the next symbol, or to the star outcome when the past is too short.
/// Keeps one cached partition row per model rule.
class UpdateFunction {
 public:
  struct Outcome {
    std::optional<Symbol> symbol;  // nullopt is the star outcome
    /// 0 for spontaneous draws, otherwise the length of the context used.
    std::size_t context_length = 0;
  };

  explicit UpdateFunction(ContextTreeModel model);

  const ContextTreeModel& model() const { return model_; }
  /// #E eps: the measure of the region where symbols appear regardless of the past.
  double spontaneous_mass() const { return spontaneous_.spontaneous_mass(); }
  std::optional<Symbol> spontaneous(double u) const { return spontaneous_.locate(u); }
  const PartitionRow& spontaneous_row() const { return spontaneous_; }
  const PartitionRow& row(std::size_t rule_id) const { return rows_.at(rule_id); }
  const PartitionRow& row(const ContextView& context) const { return rows_.at(model_.rule_id(context)); }

  Outcome apply(double u, WordView past) const;
  std::optional<Symbol> operator()(double u, WordView past) const { return apply(u, past).symbol; }

 private:
  ContextTreeModel model_;
  PartitionRow spontaneous_;
  std::vector<PartitionRow> rows_;
};

}  // namespace vlmc
