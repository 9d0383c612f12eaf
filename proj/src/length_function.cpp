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

#include "vlmc/length_function.hpp"

#include <algorithm>
#include <cmath>

#include "vlmc/symbols.hpp"

namespace vlmc {

namespace {

// Anything this large can never fit inside a simulated window.
constexpr double kSaturation = 9.0e18;

std::uint64_t saturating_ceil(double x) {
  if (!(x < kSaturation)) {
    return kInfinite;
  }
  return static_cast<std::uint64_t>(std::ceil(x));
}

}  // namespace

LengthFunction LengthFunction::zero() { return LengthFunction(Kind::Zero); }

LengthFunction LengthFunction::identity() { return LengthFunction(Kind::Identity); }

LengthFunction LengthFunction::affine(std::uint64_t slope, std::uint64_t offset) {
  LengthFunction f(Kind::Affine);
  f.slope_ = slope;
  f.offset_ = offset;
  return f;
}

LengthFunction LengthFunction::power(double scale, double exponent) {
  if (!(scale >= 0.0) || !(exponent >= 0.0) || !std::isfinite(scale) || !std::isfinite(exponent)) {
    throw Error(ErrorCode::InvalidArgument, "power length function needs finite scale >= 0 and exponent >= 0");
  }
  LengthFunction f(Kind::Power);
  f.scale_ = scale;
  f.exponent_ = exponent;
  return f;
}

LengthFunction LengthFunction::exponential(double rate) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::InvalidArgument, "exponential length function needs a finite rate >= 0");
  }
  LengthFunction f(Kind::Exponential);
  f.rate_ = rate;
  return f;
}

LengthFunction LengthFunction::table(std::vector<std::uint64_t> values, Tail tail, std::uint64_t slope) {
  if (values.empty()) {
    throw Error(ErrorCode::InvalidArgument, "length table must have at least one entry");
  }
  LengthFunction f(Kind::Table);
  f.tail_ = tail;
  f.slope_ = tail == Tail::Linear ? slope : 0;
  f.values_ = std::move(values);
  f.prefix_max_.resize(f.values_.size());
  std::uint64_t running = 0;
  for (std::size_t k = 0; k < f.values_.size(); ++k) {
    running = std::max(running, f.values_[k]);
    f.prefix_max_[k] = running;
  }
  return f;
}

std::uint64_t LengthFunction::operator()(std::uint64_t k) const {
  switch (kind_) {
    case Kind::Zero:
      return 0;
    case Kind::Identity:
      return k;
    case Kind::Affine:
      return saturating_add(saturating_mul(slope_, k), offset_);
    case Kind::Power:
      if (k == 0) {
        return exponent_ == 0.0 ? saturating_ceil(scale_) : 0;
      }
      return saturating_ceil(scale_ * std::pow(static_cast<double>(k), exponent_));
    case Kind::Exponential:
      return saturating_ceil(std::exp(rate_ * static_cast<double>(k)));
    case Kind::Table: {
      if (k < values_.size()) {
        return values_[k];
      }
      const std::uint64_t last = values_.back();
      if (tail_ == Tail::Linear) {
        return saturating_add(last, saturating_mul(slope_, k - (values_.size() - 1)));
      }
      return last;
    }
  }
  return 0;
}

std::uint64_t LengthFunction::envelope(std::uint64_t k) const {
  if (kind_ != Kind::Table) {
    // every closed form here is non-decreasing
    return (*this)(k);
  }
  if (k < prefix_max_.size()) {
    return prefix_max_[k];
  }
  return std::max(prefix_max_.back(), (*this)(k));
}

bool LengthFunction::bounded() const {
  switch (kind_) {
    case Kind::Zero:
      return true;
    case Kind::Identity:
      return false;
    case Kind::Affine:
      return slope_ == 0;
    case Kind::Power:
      return scale_ == 0.0 || exponent_ == 0.0;
    case Kind::Exponential:
      return rate_ == 0.0;
    case Kind::Table:
      return tail_ != Tail::Linear || slope_ == 0;
  }
  return false;
}

std::uint64_t LengthFunction::supremum() const {
  if (!bounded()) {
    return kInfinite;
  }
  switch (kind_) {
    case Kind::Zero:
      return 0;
    case Kind::Affine:
      return offset_;
    case Kind::Power:
      return saturating_ceil(exponent_ == 0.0 ? scale_ : 0.0);
    case Kind::Exponential:
      return 1;
    case Kind::Table:
      return prefix_max_.back();
    case Kind::Identity:
      break;
  }
  return kInfinite;
}

}  // namespace vlmc
