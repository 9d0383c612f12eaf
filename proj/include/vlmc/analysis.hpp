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

#include "vlmc/model.hpp"
#include "vlmc/partition.hpp"
#include "vlmc/perfect_sampler.hpp"
#include "vlmc/uniform_source.hpp"

namespace vlmc {

// Distances and lengths below use kInfinite for "no reference occurrence in
// the window", which makes every bound involving them fail.

/// Spontaneous symbols Z_i over [first, last] together with the distance m_i
/// to the last spontaneous reference string and the arrow length L_i.
struct SpontaneousTrace {
  std::int64_t first = 0;
  std::int64_t last = 0;
  std::vector<std::optional<Symbol>> z;
  std::vector<std::uint64_t> m;
  std::vector<std::uint64_t> L;

  std::optional<Symbol> z_at(std::int64_t i) const { return z.at(offset(i)); }
  std::uint64_t m_at(std::int64_t i) const { return m.at(offset(i)); }
  std::uint64_t L_at(std::int64_t i) const { return L.at(offset(i)); }

 private:
  std::size_t offset(std::int64_t i) const { return static_cast<std::size_t>(i - first); }
};

/// L_i = 0 when u_i is spontaneous, otherwise m_i + |w| + ell(m_i) with the
/// monotone envelope of ell.
SpontaneousTrace spontaneous_trace(const UniformSource& u, std::int64_t first, std::int64_t last,
                                   const UpdateFunction& f);

/// ceil(ell((i + 1)|w| - 1) / |w|) on the monotone envelope.
std::uint64_t ellbar(const ContextTreeModel& model, std::uint64_t i);
/// Least k >= 1 with ellbar(k) > i; kInfinite when ellbar never exceeds i.
std::uint64_t ellbar_inv(const ContextTreeModel& model, std::uint64_t i);

/// ceil(ell(|w| - 1) / |w|) + 1: how many copies of w open a visible regeneration.
std::uint64_t sigma(const ContextTreeModel& model);

/// Block b of the rescaled chain covers Z at (b-1)|w|+1 .. b|w| and is a hit
/// when those spontaneous symbols spell w.
bool block_hit(const UniformSource& u, std::int64_t block, const UpdateFunction& f);

/// Rescaled chain over blocks [first, last]: hits, distances mbar and arrow
/// lengths Lbar (0 on hits, mbar + 1 + ellbar(mbar) otherwise).
struct RescaledTrace {
  std::int64_t first = 0;
  std::int64_t last = 0;
  std::vector<bool> hit;
  std::vector<std::uint64_t> mbar;
  std::vector<std::uint64_t> Lbar;

  bool hit_at(std::int64_t b) const { return hit.at(offset(b)); }
  std::uint64_t mbar_at(std::int64_t b) const { return mbar.at(offset(b)); }
  std::uint64_t Lbar_at(std::int64_t b) const { return Lbar.at(offset(b)); }

 private:
  std::size_t offset(std::int64_t b) const { return static_cast<std::size_t>(b - first); }
};

RescaledTrace rescaled_trace(const UniformSource& u, std::int64_t first, std::int64_t last, const UpdateFunction& f);
/// Same computation from given hit flags; block `first` is hits.front().
RescaledTrace rescaled_trace(const ContextTreeModel& model, std::int64_t first, std::vector<bool> hits);

/// max{j <= 0 : Lbar_i <= i - j for i = j..n}, or nullopt when no such j
/// lies within max_back blocks.
std::optional<std::int64_t> theta_bar(const UniformSource& u, std::int64_t n, const UpdateFunction& f,
                                      std::uint64_t max_back = kDefaultMaxBack);

struct RegenerationBoundCheck {
  bool applicable = false;  // false when theta_bar was not found
  bool holds = false;
  std::int64_t theta_bar = 0;
  std::int64_t bound = 0;  // |w| (theta_bar - 1) + 1
  std::optional<std::int64_t> theta;  // theta[0, n|w|], searched down to the bound
};

/// Compares theta[0, n|w|] with the bound derived from theta_bar[0, n].
RegenerationBoundCheck regeneration_bound_check(const UniformSource& u, std::int64_t n, const UpdateFunction& f,
                           std::uint64_t max_back = kDefaultMaxBack);

/// The dominating chain started at `origin`: D_i = 0 for i <= origin and
/// D_i = (i - i' - Lbar_i) v 0 afterwards, i' being its last zero before i.
struct DProcess {
  std::int64_t origin = 0;
  std::vector<std::uint64_t> values;  // D_origin .. D_last

  std::int64_t last() const { return origin + static_cast<std::int64_t>(values.size()) - 1; }
  std::uint64_t at(std::int64_t i) const { return i <= origin ? 0 : values.at(static_cast<std::size_t>(i - origin)); }
};

/// Requires trace.first <= origin + 1. Exact: whether D hits zero depends only
/// on blocks after the last zero.
DProcess d_process(const RescaledTrace& trace, std::int64_t origin);
DProcess d_process(const UniformSource& u, std::int64_t origin, std::int64_t horizon, const UpdateFunction& f);

/// Monte Carlo estimates of u_k = P(D^(0)_k = 0) and f_k = P(first return = k)
/// for k = 0..horizon (u_0 = 1, f_0 = 0), with the renewal-equation residual
/// r_k = u_k - sum_{i=1..k} f_i u_{k-i} and its standard error.
struct RenewalStatistics {
  std::uint64_t runs = 0;
  std::vector<double> u;
  std::vector<double> f;
  std::vector<double> u_se;
  std::vector<double> f_se;
  std::vector<double> residual;
  std::vector<double> residual_se;

  /// max_k |r_k| / se_k over k >= 1; 0/0 counts as 0 and r/0 as infinity.
  double max_standardized_residual() const;
};

RenewalStatistics u_f_statistics(const ContextTreeModel& model, std::uint64_t runs, std::uint64_t horizon,
                                 std::uint64_t seed_base);

/// Partial sums of sum_i (1 - eps^|w|)^ellbar_inv(i), the series whose
/// finiteness makes the zeros of the dominating chain summable.
struct SummabilityDiagnostic {
  std::vector<double> terms;
  std::vector<double> partial_sums;
  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
};

SummabilityDiagnostic summability_diagnostic(const ContextTreeModel& model, std::uint64_t horizon);

struct HiddenRegeneration {
  std::int64_t first = 0;
  std::int64_t last = 0;
  std::uint64_t horizon = 0;
  /// j with theta[j, j + horizon] = j. A superset of the true regeneration
  /// times that shrinks as the horizon grows.
  std::vector<std::int64_t> times;
  std::vector<std::int64_t> gaps;
  double mean_gap() const;
};

HiddenRegeneration hidden_regeneration(const UniformSource& u, std::int64_t first, std::int64_t last,
                                       std::uint64_t horizon, const UpdateFunction& f);

/// Regeneration read off a sample X_first .. X_last alone. An anchor is a k
/// where w^sigma starts and every later context, computed from the sample
/// from X_first on, stays within [k, i).
struct VisibleRegeneration {
  std::int64_t first = 0;
  std::int64_t last = 0;
  std::vector<std::uint64_t> context_lengths;  // |c(X_first .. X_{i-1})|, kInfinite when undetermined
  std::vector<std::int64_t> anchors;
  std::vector<std::int64_t> gaps;
  std::vector<Word> blocks;  // the sample cut at anchors; the first piece precedes the first anchor

  /// Latest anchor at or before t.
  std::optional<std::int64_t> theta_x(std::int64_t t) const;
};

VisibleRegeneration visible_regeneration(WordView sample, std::int64_t first, const ContextTreeModel& model);

/// max{k <= 0 : Z_k .. Z_{k+sigma|w|-1} = w^sigma and L'_i <= i - k for
/// i = k+sigma|w| .. n}, with L'_i = m_i + |w| + ell(m_i) even on spontaneous sites.
std::optional<std::int64_t> theta_prime(const UniformSource& u, std::int64_t n, const UpdateFunction& f,
                                        std::uint64_t max_back = kDefaultMaxBack);

}  // namespace vlmc
