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

#include "vlmc/perfect_sampler.hpp"

#include <cassert>
#include <set>

namespace vlmc {

namespace {

// Symbols over [lo, hi] where lo moves left as the search goes back.
// Storage grows at the front by doubling, keeping the contents contiguous.
class BackwardTape {
 public:
  BackwardTape(std::int64_t lo, std::int64_t hi) : hi_(hi), lo_(lo) {
    const auto size = static_cast<std::size_t>(hi - lo + 1);
    buffer_.resize(2 * size + 16);
    begin_ = buffer_.size() - size;
  }

  void extend_to(std::int64_t lo) {
    if (lo >= lo_) {
      return;
    }
    const auto extra = static_cast<std::size_t>(lo_ - lo);
    if (extra > begin_) {
      const std::size_t used = buffer_.size() - begin_;
      const std::size_t capacity = std::max(2 * (used + extra), buffer_.size() * 2);
      std::vector<Symbol> grown(capacity);
      std::copy(buffer_.begin() + static_cast<std::ptrdiff_t>(begin_), buffer_.end(),
                grown.end() - static_cast<std::ptrdiff_t>(used));
      begin_ = capacity - used;
      buffer_ = std::move(grown);
    }
    begin_ -= extra;
    lo_ = lo;
  }

  Symbol& operator[](std::int64_t i) { return buffer_[begin_ + static_cast<std::size_t>(i - lo_)]; }

  /// Symbols at indices [from, to).
  WordView view(std::int64_t from, std::int64_t to) const {
    return WordView(buffer_).subspan(begin_ + static_cast<std::size_t>(from - lo_), static_cast<std::size_t>(to - from));
  }

 private:
  std::int64_t hi_;
  std::int64_t lo_;
  std::vector<Symbol> buffer_;
  std::size_t begin_ = 0;
};

void require_window(std::int64_t m, std::int64_t n) {
  if (m > n) {
    throw Error(ErrorCode::InvalidArgument, "window requires m <= n");
  }
}

}  // namespace

ConstructibilityWitness constructible(const UniformSource& u, std::int64_t k, std::int64_t n, const UpdateFunction& f) {
  require_window(k, n);
  ConstructibilityWitness witness;
  witness.first = k;
  witness.last = n;
  witness.word.reserve(static_cast<std::size_t>(n - k + 1));
  for (std::int64_t i = k; i <= n; ++i) {
    const auto x = f(u(i), witness.word);
    if (!x) {
      witness.failed_at = i;
      return witness;
    }
    witness.word.push_back(*x);
  }
  witness.constructible = true;
  return witness;
}

std::optional<std::int64_t> regeneration_time(const UniformSource& u, std::int64_t m, std::int64_t n,
                                              const UpdateFunction& f, std::uint64_t max_back) {
  require_window(m, n);
  for (std::int64_t k = m;; --k) {
    if (static_cast<std::uint64_t>(m - k) > max_back) {
      return std::nullopt;
    }
    // an empty past can only yield spontaneous symbols
    if (u(k) < f.spontaneous_mass() && constructible(u, k, n, f)) {
      return k;
    }
  }
}

std::optional<SimulationResult> simulate_by_definition(const UniformSource& u, std::int64_t m, std::int64_t n,
                                                       const UpdateFunction& f, std::uint64_t max_back) {
  require_window(m, n);
  SimulationResult result;
  result.m = m;
  result.n = n;
  std::int64_t i = m;
  while (!constructible(u, i, n, f)) {
    --i;
    ++result.steps;
    if (static_cast<std::uint64_t>(m - i) > max_back) {
      return std::nullopt;
    }
  }
  result.theta = i;
  // replay
  result.sample.reserve(static_cast<std::size_t>(n - i + 1));
  for (; i <= n; ++i) {
    const auto outcome = f.apply(u(i), result.sample);
    assert(outcome.symbol);
    result.sample.push_back(*outcome.symbol);
    result.provenance.push_back(Provenance{outcome.context_length == 0, outcome.context_length});
    ++result.steps;
  }
  return result;
}

std::optional<SimulationResult> simulate_backward_forward(const UniformSource& u, std::int64_t m, std::int64_t n,
                                                          const UpdateFunction& f, std::uint64_t max_back) {
  require_window(m, n);
  SimulationResult result;
  result.m = m;
  result.n = n;
  BackwardTape tape(m, n);
  std::vector<Provenance> provenance_rev;  // indexed n - t
  provenance_rev.resize(static_cast<std::size_t>(n - m + 1));
  auto record = [&](std::int64_t t, const UpdateFunction::Outcome& outcome) {
    tape[t] = *outcome.symbol;
    const auto slot = static_cast<std::size_t>(n - t);
    if (slot >= provenance_rev.size()) {
      provenance_rev.resize(slot + 1);
    }
    provenance_rev[slot] = Provenance{outcome.context_length == 0, outcome.context_length};
    ++result.steps;
  };

  std::set<std::int64_t> pending;
  for (std::int64_t t = m; t <= n; ++t) {
    pending.insert(pending.end(), t);
  }

  // forward attempt over [m, n]
  std::int64_t i = m;
  while (!pending.empty()) {
    const auto outcome = f.apply(u(i), tape.view(m, i));
    if (!outcome.symbol) {
      break;
    }
    record(i, outcome);
    pending.erase(i);
    ++i;
  }

  i = m;
  while (!pending.empty()) {
    --i;
    ++result.steps;
    if (static_cast<std::uint64_t>(m - i) > max_back) {
      return std::nullopt;
    }
    tape.extend_to(i);
    pending.insert(pending.begin(), i);
    while (u(i) >= f.spontaneous_mass()) {
      --i;
      ++result.steps;
      if (static_cast<std::uint64_t>(m - i) > max_back) {
        return std::nullopt;
      }
      tape.extend_to(i);
      pending.insert(pending.begin(), i);
    }
    record(i, UpdateFunction::Outcome{f.spontaneous(u(i)), 0});
    pending.erase(pending.begin());
    while (!pending.empty()) {
      const std::int64_t t = *pending.begin();
      const auto outcome = f.apply(u(t), tape.view(i, t));
      if (!outcome.symbol) {
        break;
      }
      record(t, outcome);
      pending.erase(pending.begin());
    }
  }

  result.theta = i;
  const WordView built = tape.view(i, n + 1);
  result.sample.assign(built.begin(), built.end());
  result.provenance.reserve(result.sample.size());
  for (std::int64_t t = i; t <= n; ++t) {
    result.provenance.push_back(provenance_rev[static_cast<std::size_t>(n - t)]);
  }
  return result;
}

}  // namespace vlmc
