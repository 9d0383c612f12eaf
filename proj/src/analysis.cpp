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

#include "vlmc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace vlmc {

namespace {

// Reach values are clamped here so that q - reach never overflows.
constexpr std::uint64_t kReachCap = std::uint64_t{1} << 62;

std::int64_t clamp_reach(std::uint64_t reach) { return static_cast<std::int64_t>(std::min(reach, kReachCap)); }

std::int64_t wlen(const ContextTreeModel& model) { return static_cast<std::int64_t>(model.reference().size()); }

// Latest k <= target such that anchor(k) holds and every non-exempt index
// i in [k + span, n] sees an occurrence of the pattern, starting at some
// q >= k and ending before i, with q - reach(m_i) >= k, where q is the
// latest such start and m_i = i - q - len.
//
// Indices are scanned downward from n. An occurrence at q settles every
// index in [q + len, pending_hi] whose latest occurrence was still unknown.
struct AnchorSearch {
  std::int64_t target = 0;
  std::int64_t n = 0;
  std::int64_t span = 0;
  std::int64_t len = 1;
  std::function<bool(std::int64_t)> occurrence;
  std::function<bool(std::int64_t)> anchor;
  std::function<bool(std::int64_t)> exempt;
  std::function<std::uint64_t(std::uint64_t)> reach;

  std::optional<std::int64_t> run(std::uint64_t max_back) const {
    constexpr std::int64_t kUnresolved = std::numeric_limits<std::int64_t>::min();
    std::vector<std::int64_t> settle;  // settle[n - i]: earliest allowed k for index i
    std::vector<bool> is_exempt;
    std::int64_t pending_hi = n;
    std::int64_t pending = 0;
    std::int64_t lowest = std::numeric_limits<std::int64_t>::max();
    auto slot = [&](std::int64_t i) { return static_cast<std::size_t>(n - i); };

    for (std::int64_t k = n;; --k) {
      if (settle.size() <= slot(k)) {
        settle.resize(slot(k) + 1, kUnresolved);
        is_exempt.resize(slot(k) + 1, false);
      }
      is_exempt[slot(k)] = exempt && exempt(k);

      const std::int64_t entering = k + span;
      if (entering <= n && !is_exempt[slot(entering)]) {
        if (entering > pending_hi) {
          lowest = std::min(lowest, settle[slot(entering)]);
        } else {
          ++pending;
        }
      }

      if (k <= n - len && occurrence(k)) {
        for (std::int64_t i = k + len; i <= pending_hi; ++i) {
          const std::int64_t r = k - clamp_reach(reach(static_cast<std::uint64_t>(i - k - len)));
          settle[slot(i)] = r;
          if (i >= entering && !is_exempt[slot(i)]) {
            --pending;
            lowest = std::min(lowest, r);
          }
        }
        pending_hi = std::min(pending_hi, k + len - 1);
      }

      if (k <= target) {
        if (anchor(k) && pending == 0 && lowest >= k) {
          return k;
        }
        if (static_cast<std::uint64_t>(target - k) >= max_back) {
          return std::nullopt;
        }
      }
    }
  }
};

}  // namespace

SpontaneousTrace spontaneous_trace(const UniformSource& u, std::int64_t first, std::int64_t last,
                                   const UpdateFunction& f) {
  if (first > last) {
    throw Error(ErrorCode::InvalidArgument, "trace window requires first <= last");
  }
  const ContextTreeModel& model = f.model();
  const Word& w = model.reference();
  const auto size = static_cast<std::size_t>(last - first + 1);
  SpontaneousTrace trace;
  trace.first = first;
  trace.last = last;
  trace.z.resize(size);
  trace.m.assign(size, kInfinite);
  trace.L.assign(size, kInfinite);
  for (std::size_t j = 0; j < size; ++j) {
    trace.z[j] = f.spontaneous(u(first + static_cast<std::int64_t>(j)));
  }
  // end (exclusive) of the latest full occurrence of w seen so far
  std::optional<std::size_t> end;
  for (std::size_t j = 0; j < size; ++j) {
    if (j >= w.size()) {
      bool match = true;
      for (std::size_t t = 0; t < w.size() && match; ++t) {
        match = trace.z[j - w.size() + t] == w[t];
      }
      if (match) {
        end = j;
      }
    }
    if (end) {
      trace.m[j] = j - *end;
    }
    if (trace.z[j]) {
      trace.L[j] = 0;
    } else if (trace.m[j] != kInfinite) {
      trace.L[j] = saturating_add(saturating_add(trace.m[j], w.size()), model.ell().envelope(trace.m[j]));
    }
  }
  return trace;
}

std::uint64_t ellbar(const ContextTreeModel& model, std::uint64_t i) {
  const std::uint64_t len = model.reference().size();
  const std::uint64_t at = saturating_mul(saturating_add(i, 1), len) - 1;
  const std::uint64_t value = model.ell().envelope(at);
  if (value == kInfinite) {
    return kInfinite;
  }
  return value / len + (value % len != 0 ? 1 : 0);
}

std::uint64_t ellbar_inv(const ContextTreeModel& model, std::uint64_t i) {
  const LengthFunction& ell = model.ell();
  const std::uint64_t len = model.reference().size();
  if (ell.bounded()) {
    const std::uint64_t top = ell.supremum() / len + (ell.supremum() % len != 0 ? 1 : 0);
    if (top <= i) {
      return kInfinite;
    }
  }
  if (ellbar(model, 1) > i) {
    return 1;
  }
  // ellbar is non-decreasing: gallop, then bisect (lo fails, hi succeeds)
  std::uint64_t lo = 1;
  std::uint64_t hi = 2;
  while (ellbar(model, hi) <= i) {
    if (hi >= kReachCap) {
      return kInfinite;
    }
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (ellbar(model, mid) > i ? hi : lo) = mid;
  }
  return hi;
}

std::uint64_t sigma(const ContextTreeModel& model) {
  const std::uint64_t len = model.reference().size();
  const std::uint64_t value = model.ell().envelope(len - 1);
  return value / len + (value % len != 0 ? 1 : 0) + 1;
}

bool block_hit(const UniformSource& u, std::int64_t block, const UpdateFunction& f) {
  const Word& w = f.model().reference();
  const std::int64_t start = (block - 1) * static_cast<std::int64_t>(w.size()) + 1;
  for (std::size_t t = 0; t < w.size(); ++t) {
    if (f.spontaneous(u(start + static_cast<std::int64_t>(t))) != w[t]) {
      return false;
    }
  }
  return true;
}

RescaledTrace rescaled_trace(const ContextTreeModel& model, std::int64_t first, std::vector<bool> hits) {
  RescaledTrace trace;
  trace.first = first;
  trace.last = first + static_cast<std::int64_t>(hits.size()) - 1;
  trace.hit = std::move(hits);
  trace.mbar.assign(trace.hit.size(), kInfinite);
  trace.Lbar.assign(trace.hit.size(), kInfinite);
  std::optional<std::size_t> last_hit;
  for (std::size_t j = 0; j < trace.hit.size(); ++j) {
    if (last_hit) {
      trace.mbar[j] = j - *last_hit - 1;
    }
    if (trace.hit[j]) {
      trace.Lbar[j] = 0;
      last_hit = j;
    } else if (trace.mbar[j] != kInfinite) {
      trace.Lbar[j] = saturating_add(trace.mbar[j] + 1, ellbar(model, trace.mbar[j]));
    }
  }
  return trace;
}

RescaledTrace rescaled_trace(const UniformSource& u, std::int64_t first, std::int64_t last, const UpdateFunction& f) {
  if (first > last) {
    throw Error(ErrorCode::InvalidArgument, "trace window requires first <= last");
  }
  std::vector<bool> hits;
  hits.reserve(static_cast<std::size_t>(last - first + 1));
  for (std::int64_t b = first; b <= last; ++b) {
    hits.push_back(block_hit(u, b, f));
  }
  return rescaled_trace(f.model(), first, std::move(hits));
}

std::optional<std::int64_t> theta_bar(const UniformSource& u, std::int64_t n, const UpdateFunction& f,
                                      std::uint64_t max_back) {
  if (n < 0) {
    throw Error(ErrorCode::InvalidArgument, "theta_bar requires n >= 0");
  }
  const ContextTreeModel& model = f.model();
  auto hit = [&](std::int64_t b) { return block_hit(u, b, f); };
  AnchorSearch search;
  search.target = 0;
  search.n = n;
  search.span = 0;
  search.len = 1;
  search.occurrence = hit;
  search.anchor = [](std::int64_t) { return true; };
  search.exempt = hit;
  search.reach = [&](std::uint64_t m) { return ellbar(model, m); };
  return search.run(max_back);
}

RegenerationBoundCheck regeneration_bound_check(const UniformSource& u, std::int64_t n, const UpdateFunction& f, std::uint64_t max_back) {
  RegenerationBoundCheck check;
  const auto bar = theta_bar(u, n, f, max_back);
  if (!bar) {
    return check;
  }
  const std::int64_t len = wlen(f.model());
  check.applicable = true;
  check.theta_bar = *bar;
  check.bound = len * (*bar - 1) + 1;
  check.theta = regeneration_time(u, 0, n * len, f, static_cast<std::uint64_t>(-check.bound));
  check.holds = check.theta && *check.theta >= check.bound;
  return check;
}

DProcess d_process(const RescaledTrace& trace, std::int64_t origin) {
  if (trace.first > origin + 1 || trace.last < origin) {
    throw Error(ErrorCode::InvalidArgument, "rescaled trace does not cover the blocks after the origin");
  }
  DProcess d;
  d.origin = origin;
  d.values.assign(static_cast<std::size_t>(trace.last - origin + 1), 0);
  std::int64_t last_zero = origin;
  for (std::int64_t i = origin + 1; i <= trace.last; ++i) {
    const auto gap = static_cast<std::uint64_t>(i - last_zero);
    const std::uint64_t reach = trace.Lbar_at(i);
    const std::uint64_t value = reach >= gap ? 0 : gap - reach;
    d.values[static_cast<std::size_t>(i - origin)] = value;
    if (value == 0) {
      last_zero = i;
    }
  }
  return d;
}

DProcess d_process(const UniformSource& u, std::int64_t origin, std::int64_t horizon, const UpdateFunction& f) {
  if (horizon < origin) {
    throw Error(ErrorCode::InvalidArgument, "d_process requires horizon >= origin");
  }
  if (horizon == origin) {
    return DProcess{origin, {0}};
  }
  return d_process(rescaled_trace(u, origin + 1, horizon, f), origin);
}

double RenewalStatistics::max_standardized_residual() const {
  double worst = 0.0;
  for (std::size_t k = 1; k < residual.size(); ++k) {
    const double r = std::abs(residual[k]);
    if (r == 0.0) {
      continue;
    }
    worst = std::max(worst, residual_se[k] > 0.0 ? r / residual_se[k] : std::numeric_limits<double>::infinity());
  }
  return worst;
}

RenewalStatistics u_f_statistics(const ContextTreeModel& model, std::uint64_t runs, std::uint64_t horizon,
                                 std::uint64_t seed_base) {
  if (runs == 0 || horizon == 0) {
    throw Error(ErrorCode::InvalidArgument, "u_f_statistics needs runs >= 1 and horizon >= 1");
  }
  const UpdateFunction f(model);
  const std::size_t size = horizon + 1;
  std::vector<std::uint64_t> zeros(size, 0);
  std::vector<std::uint64_t> returns(size, 0);
  for (std::uint64_t run = 0; run < runs; ++run) {
    const UniformSource u = UniformSource::counter(derive_seed(seed_base, run));
    const DProcess d = d_process(u, 0, static_cast<std::int64_t>(horizon), f);
    bool returned = false;
    for (std::size_t k = 1; k < size; ++k) {
      if (d.values[k] == 0) {
        ++zeros[k];
        if (!returned) {
          ++returns[k];
          returned = true;
        }
      }
    }
  }

  RenewalStatistics stats;
  stats.runs = runs;
  const double total = static_cast<double>(runs);
  auto se = [&](double p) { return std::sqrt(p * (1.0 - p) / total); };
  stats.u.resize(size);
  stats.f.resize(size);
  stats.u_se.resize(size);
  stats.f_se.resize(size);
  stats.u[0] = 1.0;
  for (std::size_t k = 1; k < size; ++k) {
    stats.u[k] = static_cast<double>(zeros[k]) / total;
    stats.f[k] = static_cast<double>(returns[k]) / total;
    stats.u_se[k] = se(stats.u[k]);
    stats.f_se[k] = se(stats.f[k]);
  }
  stats.residual.assign(size, 0.0);
  stats.residual_se.assign(size, 0.0);
  for (std::size_t k = 1; k < size; ++k) {
    double convolution = 0.0;
    double variance = stats.u_se[k] * stats.u_se[k];
    for (std::size_t i = 1; i <= k; ++i) {
      convolution += stats.f[i] * stats.u[k - i];
      variance += stats.u[k - i] * stats.u[k - i] * stats.f_se[i] * stats.f_se[i] +
                  stats.f[i] * stats.f[i] * stats.u_se[k - i] * stats.u_se[k - i];
    }
    stats.residual[k] = stats.u[k] - convolution;
    stats.residual_se[k] = std::sqrt(variance);
  }
  return stats;
}

SummabilityDiagnostic summability_diagnostic(const ContextTreeModel& model, std::uint64_t horizon) {
  if (horizon < 4) {
    throw Error(ErrorCode::InvalidArgument, "summability diagnostic needs horizon >= 4");
  }
  SummabilityDiagnostic diag;
  const double q = 1.0 - std::pow(model.epsilon(), static_cast<double>(model.reference().size()));
  double sum = 0.0;
  for (std::uint64_t i = 0; i < horizon; ++i) {
    const std::uint64_t k = ellbar_inv(model, i);
    const double term = (k == kInfinite || q == 0.0) ? 0.0 : std::pow(q, static_cast<double>(k));
    diag.terms.push_back(term);
    sum += term;
    diag.partial_sums.push_back(sum);
  }
  const double tail = diag.terms.back();
  const double mid = diag.terms[horizon / 2];
  if (tail == 0.0) {
    diag.verdict = Verdict::Pass;
    diag.reason = "terms vanish";
    return diag;
  }
  // fit tail ~ i^(-p) between horizon/2 and horizon
  const double p = std::log(mid / tail) / std::log(static_cast<double>(horizon - 1) / static_cast<double>(horizon / 2));
  if (p > 1.05) {
    diag.verdict = Verdict::Pass;
  } else if (p < 0.95) {
    diag.verdict = Verdict::Fail;
  }
  diag.reason = "tail decay exponent about " + std::to_string(p);
  return diag;
}

double HiddenRegeneration::mean_gap() const {
  if (gaps.empty()) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double sum = 0.0;
  for (const auto g : gaps) {
    sum += static_cast<double>(g);
  }
  return sum / static_cast<double>(gaps.size());
}

HiddenRegeneration hidden_regeneration(const UniformSource& u, std::int64_t first, std::int64_t last,
                                       std::uint64_t horizon, const UpdateFunction& f) {
  if (first > last) {
    throw Error(ErrorCode::InvalidArgument, "regeneration window requires first <= last");
  }
  HiddenRegeneration report;
  report.first = first;
  report.last = last;
  report.horizon = horizon;
  for (std::int64_t j = first; j <= last; ++j) {
    if (u(j) < f.spontaneous_mass() && constructible(u, j, j + static_cast<std::int64_t>(horizon), f)) {
      if (!report.times.empty()) {
        report.gaps.push_back(j - report.times.back());
      }
      report.times.push_back(j);
    }
  }
  return report;
}

std::optional<std::int64_t> VisibleRegeneration::theta_x(std::int64_t t) const {
  auto it = std::upper_bound(anchors.begin(), anchors.end(), t);
  if (it == anchors.begin()) {
    return std::nullopt;
  }
  return *std::prev(it);
}

VisibleRegeneration visible_regeneration(WordView sample, std::int64_t first, const ContextTreeModel& model) {
  VisibleRegeneration report;
  report.first = first;
  report.last = first + static_cast<std::int64_t>(sample.size()) - 1;
  const Word& w = model.reference();
  const std::size_t opening = sigma(model) * w.size();
  const std::size_t size = sample.size();

  report.context_lengths.resize(size);
  for (std::size_t j = 0; j < size; ++j) {
    const auto context = model.context_of(sample.first(j));
    report.context_lengths[j] = context ? context->symbols.size() : kInfinite;
  }

  // slack[j] = min over i >= j of (i - L_i), in sample offsets
  constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::min() / 2;
  std::vector<std::int64_t> slack(size + 1, std::numeric_limits<std::int64_t>::max());
  for (std::size_t j = size; j-- > 0;) {
    const std::uint64_t L = report.context_lengths[j];
    const std::int64_t own = L >= kReachCap ? kNever : static_cast<std::int64_t>(j) - static_cast<std::int64_t>(L);
    slack[j] = std::min(slack[j + 1], own);
  }

  for (std::size_t k = 0; k + opening <= size; ++k) {
    bool match = true;
    for (std::size_t t = 0; t < opening && match; ++t) {
      match = sample[k + t] == w[t % w.size()];
    }
    if (match && slack[k + opening] >= static_cast<std::int64_t>(k)) {
      report.anchors.push_back(first + static_cast<std::int64_t>(k));
    }
  }

  std::size_t cut = 0;
  for (const std::int64_t a : report.anchors) {
    const auto at = static_cast<std::size_t>(a - first);
    report.blocks.emplace_back(sample.begin() + static_cast<std::ptrdiff_t>(cut),
                               sample.begin() + static_cast<std::ptrdiff_t>(at));
    cut = at;
  }
  report.blocks.emplace_back(sample.begin() + static_cast<std::ptrdiff_t>(cut), sample.end());
  for (std::size_t j = 1; j < report.anchors.size(); ++j) {
    report.gaps.push_back(report.anchors[j] - report.anchors[j - 1]);
  }
  return report;
}

std::optional<std::int64_t> theta_prime(const UniformSource& u, std::int64_t n, const UpdateFunction& f,
                                        std::uint64_t max_back) {
  const ContextTreeModel& model = f.model();
  const Word& w = model.reference();
  const std::int64_t len = wlen(model);
  const std::int64_t opening = static_cast<std::int64_t>(sigma(model)) * len;
  if (n < opening) {
    throw Error(ErrorCode::InvalidArgument, "theta_prime requires n >= sigma |w|");
  }
  auto spells = [&](std::int64_t q, std::int64_t copies) {
    for (std::int64_t t = 0; t < copies * len; ++t) {
      if (f.spontaneous(u(q + t)) != w[static_cast<std::size_t>(t % len)]) {
        return false;
      }
    }
    return true;
  };
  AnchorSearch search;
  search.target = 0;
  search.n = n;
  search.span = opening;
  search.len = len;
  search.occurrence = [&](std::int64_t q) { return spells(q, 1); };
  search.anchor = [&](std::int64_t k) { return spells(k, opening / len); };
  search.reach = [&](std::uint64_t m) { return model.ell().envelope(m); };
  return search.run(max_back);
}

}  // namespace vlmc
