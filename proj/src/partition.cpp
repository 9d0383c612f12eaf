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

#include "vlmc/partition.hpp"

#include <algorithm>
#include <string>

namespace vlmc {

namespace {

// Rounding noise below this is treated as an exact zero width.
constexpr double kWidthSlack = 1e-12;

}  // namespace

PartitionRow PartitionRow::spontaneous(const Alphabet& alphabet, double epsilon) {
  PartitionRow row;
  row.regular_count_ = alphabet.regular_count();
  row.epsilon_ = epsilon;
  row.spontaneous_mass_ = static_cast<double>(row.regular_count_) * epsilon;
  return row;
}

PartitionRow PartitionRow::context(const Alphabet& alphabet, double epsilon, const ProbabilityVector& p) {
  PartitionRow row = spontaneous(alphabet, epsilon);
  if (p.size() != alphabet.size()) {
    throw Error(ErrorCode::InvalidArgument, "probability vector does not match the alphabet");
  }
  row.context_.resize(p.size());
  row.breaks_.resize(p.size());
  double cursor = row.spontaneous_mass_;
  for (std::size_t a = 0; a < p.size(); ++a) {
    double width = a < row.regular_count_ ? p[a] - epsilon : p[a];
    if (width < 0.0) {
      if (width < -kWidthSlack) {
        throw Error(ErrorCode::NegativeWidth, "p(" + std::string(1, alphabet.glyphs()[a]) + "|v) is below epsilon");
      }
      width = 0.0;
    }
    row.breaks_[a] = cursor;
    row.context_[a] = Interval{cursor, cursor + width};
    cursor += width;
  }
  // the closed-form total is exactly 1; pin the last non-empty block to it
  for (std::size_t a = p.size(); a-- > 0;) {
    if (row.context_[a].length() > 0.0) {
      row.context_[a].hi = 1.0;
      break;
    }
  }
  return row;
}

Interval PartitionRow::spontaneous_interval(Symbol a) const {
  if (a.index >= regular_count_) {
    return Interval{};
  }
  const double i = static_cast<double>(a.index);
  return Interval{i * epsilon_, (i + 1.0) * epsilon_};
}

double PartitionRow::k_length(Symbol a) const {
  double length = spontaneous_interval(a).length();
  if (has_context_block()) {
    length += context_interval(a).length();
  }
  return length;
}

std::optional<Symbol> PartitionRow::locate(double u) const {
  if (u < spontaneous_mass_) {
    // J(a|empty) = [(a-1) eps, a eps); compare against the products so the
    // boundaries match the closed form exactly
    for (std::size_t a = 0; a < regular_count_; ++a) {
      if (u < static_cast<double>(a + 1) * epsilon_) {
        return Symbol{static_cast<std::uint8_t>(a)};
      }
    }
    return Symbol{static_cast<std::uint8_t>(regular_count_ - 1)};
  }
  if (context_.empty()) {
    return std::nullopt;
  }
  // last block starting at or before u that is non-empty
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), u);
  for (auto a = static_cast<std::size_t>(it - breaks_.begin()); a-- > 0;) {
    if (context_[a].contains(u)) {
      return Symbol{static_cast<std::uint8_t>(a)};
    }
  }
  return std::nullopt;
}

std::vector<Interval> PartitionRow::intervals() const {
  std::vector<Interval> out;
  for (std::size_t a = 0; a < regular_count_; ++a) {
    out.push_back(spontaneous_interval(Symbol{static_cast<std::uint8_t>(a)}));
  }
  out.insert(out.end(), context_.begin(), context_.end());
  return out;
}

PartitionRow build_partition(const ContextTreeModel& model, WordView context) {
  if (context.empty()) {
    return PartitionRow::spontaneous(model.alphabet(), model.epsilon());
  }
  return PartitionRow::context(model.alphabet(), model.epsilon(), model.transition_vector(context));
}

UpdateFunction::UpdateFunction(ContextTreeModel model)
    : model_(std::move(model)), spontaneous_(PartitionRow::spontaneous(model_.alphabet(), model_.epsilon())) {
  rows_.reserve(model_.rule_count());
  for (std::size_t id = 0; id < model_.rule_count(); ++id) {
    rows_.push_back(PartitionRow::context(model_.alphabet(), model_.epsilon(), model_.rule(id)));
  }
}

UpdateFunction::Outcome UpdateFunction::apply(double u, WordView past) const {
  if (u < spontaneous_mass()) {
    return Outcome{spontaneous_.locate(u), 0};
  }
  const auto context = model_.context_of(past);
  if (!context) {
    return Outcome{std::nullopt, 0};
  }
  return Outcome{row(*context).locate(u), context->symbols.size()};
}

}  // namespace vlmc
