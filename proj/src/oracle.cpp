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

#include "vlmc/oracle.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <limits>
#include <set>

#include "vlmc/partition.hpp"

namespace vlmc {

RenewalSpec renewal_spec(const ContextTreeModel& model) {
  if (model.alphabet().size() != 2 || model.reference().size() != 1 ||
      model.ell().kind() != LengthFunction::Kind::Zero) {
    throw Error(ErrorCode::InvalidArgument, "renewal spec needs two symbols, a one-symbol reference and ell = 0");
  }
  const Symbol renewal = model.reference().front();
  const Symbol other{static_cast<std::uint8_t>(1 - renewal.index)};
  RenewalSpec spec;
  spec.p = [model, renewal, other](std::uint64_t i) {
    Word context(static_cast<std::size_t>(i) + 1, other);
    context.front() = renewal;
    return model.transition_vector(ContextView{context, i})[renewal.index];
  };
  spec.tail_floor = 1.0;
  for (std::size_t id = 0; id < model.rule_count(); ++id) {
    spec.tail_floor = std::min(spec.tail_floor, model.rule(id)[renewal.index]);
  }
  return spec;
}

RenewalMarginal renewal_stationary_marginal(const RenewalSpec& spec, std::uint64_t truncation) {
  if (truncation == 0) {
    throw Error(ErrorCode::InvalidArgument, "truncation must be positive");
  }
  double survival = 1.0;  // P(T > k)
  double mean = 0.0;
  for (std::uint64_t k = 0; k < truncation; ++k) {
    mean += survival;
    survival *= 1.0 - spec.p(k);
  }
  RenewalMarginal result;
  result.truncation = truncation;
  result.value = 1.0 / mean;
  if (survival == 0.0) {
    result.remainder = 0.0;
  } else if (spec.tail_floor > 0.0) {
    result.remainder = result.value - 1.0 / (mean + survival / spec.tail_floor);
  } else {
    result.remainder = result.value;
  }
  return result;
}

ChiSquareReport chi_square_test(const std::vector<std::uint64_t>& observed, const std::vector<double>& probabilities,
                                double level) {
  if (observed.size() != probabilities.size() || observed.empty()) {
    throw Error(ErrorCode::InvalidArgument, "chi-square test needs matching non-empty bins");
  }
  double total = 0.0;
  for (const auto c : observed) {
    total += static_cast<double>(c);
  }
  ChiSquareReport report;
  report.level = level;
  double o = 0.0;
  double e = 0.0;
  for (std::size_t j = 0; j < observed.size(); ++j) {
    o += static_cast<double>(observed[j]);
    e += probabilities[j] * total;
    if (e >= 5.0) {
      report.observed.push_back(o);
      report.expected.push_back(e);
      o = 0.0;
      e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (report.expected.empty()) {
      report.observed.push_back(o);
      report.expected.push_back(e);
    } else {
      report.observed.back() += o;
      report.expected.back() += e;
    }
  }
  for (std::size_t j = 0; j < report.observed.size(); ++j) {
    if (report.expected[j] == 0.0) {
      if (report.observed[j] > 0.0) {
        report.statistic = std::numeric_limits<double>::infinity();
      }
      continue;
    }
    const double d = report.observed[j] - report.expected[j];
    report.statistic += d * d / report.expected[j];
  }
  report.dof = report.observed.size() - 1;
  if (!std::isfinite(report.statistic)) {
    report.p_value = 0.0;
  } else if (report.dof == 0) {
    report.p_value = 1.0;
  } else {
    const boost::math::chi_squared dist(static_cast<double>(report.dof));
    report.p_value = boost::math::cdf(boost::math::complement(dist, report.statistic));
  }
  report.passed = report.p_value >= 1.0 - level;
  return report;
}

ChiSquareReport geometric_test(const std::vector<std::uint64_t>& samples, double p, double level) {
  if (samples.empty()) {
    throw Error(ErrorCode::InvalidArgument, "geometric test needs samples");
  }
  if (!(p > 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "geometric parameter must lie in (0, 1]");
  }
  const double total = static_cast<double>(samples.size());
  // bins 0..K-1 plus the tail {>= K}, with K as large as keeps every expected count >= 5
  std::vector<double> probabilities;
  double tail = 1.0;
  for (double mass = p; mass * total >= 5.0 && (tail - mass) * total >= 5.0; mass *= 1.0 - p) {
    probabilities.push_back(mass);
    tail -= mass;
  }
  probabilities.push_back(std::max(tail, 0.0));
  const std::size_t bins = probabilities.size();
  std::vector<std::uint64_t> counts(bins, 0);
  for (const auto s : samples) {
    ++counts[std::min<std::uint64_t>(s, bins - 1)];
  }
  return chi_square_test(counts, probabilities, level);
}

namespace {

using Mass = unsigned __int128;

constexpr std::int16_t kUnknown = -1;
constexpr std::int16_t kNotSpontaneous = -2;

// Enumerates the backward-forward sampler symbolically. Each uniform is
// revealed only as far as the sampler looks at it: first whether it is
// spontaneous (and which symbol), later, for a site known to be
// non-spontaneous, which context block it falls in.
class WindowEnumerator {
 public:
  WindowEnumerator(const ContextTreeModel& model, std::size_t length, std::uint64_t grid, std::uint64_t depth)
      : f_(model), length_(static_cast<std::int64_t>(length)), grid_(grid), depth_(static_cast<std::int64_t>(depth)) {
    const std::size_t sites = length + depth;
    Mass full = 1;
    for (std::size_t j = 0; j < sites; ++j) {
      if (full > std::numeric_limits<Mass>::max() / grid) {
        throw Error(ErrorCode::InvalidArgument, "grid^(length + depth) overflows 128 bits");
      }
      full *= grid;
    }
    full_ = full;
    powers_.assign(sites + 1, 1);
    for (std::size_t j = 1; j <= sites; ++j) {
      powers_[j] = powers_[j - 1] * grid;
    }
    spontaneous_cells_.resize(model.alphabet().size());
    for (std::size_t a = 0; a < model.alphabet().size(); ++a) {
      spontaneous_cells_[a] = cells(f_.spontaneous_row().spontaneous_interval(Symbol{static_cast<std::uint8_t>(a)}).length());
    }
    quiet_cells_ = grid - cells(f_.spontaneous_mass());
    for (std::size_t id = 0; id < model.rule_count(); ++id) {
      const PartitionRow& row = f_.row(id);
      std::vector<std::uint64_t> full_cells;
      std::vector<std::uint64_t> block_cells;
      for (std::size_t a = 0; a < model.alphabet().size(); ++a) {
        const Symbol s{static_cast<std::uint8_t>(a)};
        full_cells.push_back(cells(row.k_length(s)));
        block_cells.push_back(cells(row.context_interval(s).length()));
        cells(row.context_interval(s).lo);
      }
      k_cells_.push_back(std::move(full_cells));
      block_cells_.push_back(std::move(block_cells));
    }
  }

  WindowLaw run() {
    State s;
    s.low = 1;
    s.symbols.assign(static_cast<std::size_t>(length_ + depth_), Symbol{});
    s.status.assign(s.symbols.size(), kUnknown);
    for (std::int64_t t = 1; t <= length_; ++t) {
      s.pending.insert(t);
    }
    s.mass = 1;
    advance(std::move(s));

    WindowLaw result;
    result.length = static_cast<std::size_t>(length_);
    result.grid = grid_;
    result.depth = static_cast<std::uint64_t>(depth_);
    Mass resolved = 0;
    for (const auto& [word, mass] : law_) {
      resolved += mass;
      result.law[word] = to_double(mass);
    }
    result.unresolved = to_double(unresolved_);
    result.balanced = resolved + unresolved_ == full_;
    result.paths = paths_;
    return result;
  }

 private:
  struct State {
    std::int64_t low = 1;
    Word symbols;                     // indexed by site + depth - 1
    std::vector<std::int16_t> status;  // symbol index, kUnknown or kNotSpontaneous
    std::set<std::int64_t> pending;
    Mass mass = 0;
    std::size_t revealed = 0;
  };

  std::uint64_t cells(double x) const {
    const double scaled = x * static_cast<double>(grid_);
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-9) {
      throw Error(ErrorCode::InvalidArgument, "partition endpoint is not on the grid");
    }
    return static_cast<std::uint64_t>(rounded);
  }

  double to_double(Mass m) const { return static_cast<double>(static_cast<long double>(m) / static_cast<long double>(full_)); }

  std::size_t slot(std::int64_t t) const { return static_cast<std::size_t>(t + depth_ - 1); }

  void place(State& s, std::int64_t t, std::size_t a) const {
    s.symbols[slot(t)] = Symbol{static_cast<std::uint8_t>(a)};
    s.status[slot(t)] = static_cast<std::int16_t>(a);
    s.pending.erase(t);
  }

  // greedy construction of the smallest pending sites
  void advance(State s) {
    while (!s.pending.empty()) {
      const std::int64_t t = *s.pending.begin();
      const WordView past = WordView(s.symbols).subspan(slot(s.low), static_cast<std::size_t>(t - s.low));
      const auto context = f_.model().context_of(past);
      const bool unknown = s.status[slot(t)] == kUnknown;
      if (context) {
        const std::size_t id = f_.model().rule_id(*context);
        const auto& counts = unknown ? k_cells_[id] : block_cells_[id];
        for (std::size_t a = 0; a < counts.size(); ++a) {
          if (counts[a] == 0) {
            continue;
          }
          State child = s;
          if (unknown) {
            child.mass *= counts[a];
            ++child.revealed;
          } else {
            child.mass = child.mass / quiet_cells_ * counts[a];
          }
          place(child, t, a);
          advance(std::move(child));
        }
        return;
      }
      if (!unknown) {
        step_back(std::move(s));
        return;
      }
      for (std::size_t a = 0; a < spontaneous_cells_.size(); ++a) {
        if (spontaneous_cells_[a] == 0) {
          continue;
        }
        State child = s;
        child.mass *= spontaneous_cells_[a];
        ++child.revealed;
        place(child, t, a);
        advance(std::move(child));
      }
      if (quiet_cells_ > 0) {
        s.mass *= quiet_cells_;
        ++s.revealed;
        s.status[slot(t)] = kNotSpontaneous;
        step_back(std::move(s));
      }
      return;
    }
    ++paths_;
    Word window(s.symbols.begin() + static_cast<std::ptrdiff_t>(slot(1)), s.symbols.end());
    law_[window] += s.mass * powers_[powers_.size() - 1 - s.revealed];
  }

  void step_back(State s) {
    const std::int64_t i = s.low - 1;
    if (1 - i > depth_) {
      ++paths_;
      unresolved_ += s.mass * powers_[powers_.size() - 1 - s.revealed];
      return;
    }
    s.low = i;
    s.pending.insert(i);
    for (std::size_t a = 0; a < spontaneous_cells_.size(); ++a) {
      if (spontaneous_cells_[a] == 0) {
        continue;
      }
      State child = s;
      child.mass *= spontaneous_cells_[a];
      ++child.revealed;
      place(child, i, a);
      advance(std::move(child));
    }
    if (quiet_cells_ > 0) {
      s.mass *= quiet_cells_;
      ++s.revealed;
      s.status[slot(i)] = kNotSpontaneous;
      step_back(std::move(s));
    }
  }

  UpdateFunction f_;
  std::int64_t length_;
  std::uint64_t grid_;
  std::int64_t depth_;
  Mass full_ = 1;
  std::vector<Mass> powers_;
  std::vector<std::uint64_t> spontaneous_cells_;
  std::uint64_t quiet_cells_ = 0;
  std::vector<std::vector<std::uint64_t>> k_cells_;
  std::vector<std::vector<std::uint64_t>> block_cells_;
  std::map<Word, Mass, WordLess> law_;
  Mass unresolved_ = 0;
  std::uint64_t paths_ = 0;
};

}  // namespace

WindowLaw brute_force_window_law(const ContextTreeModel& model, std::size_t length, std::uint64_t grid,
                                 std::uint64_t depth) {
  if (length == 0 || grid == 0) {
    throw Error(ErrorCode::InvalidArgument, "window law needs length >= 1 and grid >= 1");
  }
  return WindowEnumerator(model, length, grid, depth).run();
}

}  // namespace vlmc
