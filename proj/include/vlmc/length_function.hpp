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
#include <vector>

namespace vlmc {

/// The map k -> ell(k) telling how far beyond the last occurrence of the
/// reference string a context reaches. All values are finite; closed forms
/// that outgrow 64 bits saturate at kInfinite.
class LengthFunction {
 public:
  enum class Kind { Zero, Identity, Affine, Power, Exponential, Table };

  /// How a table continues past its last entry.
  enum class Tail { Unspecified, Hold, Linear };

  static LengthFunction zero();
  static LengthFunction identity();
  /// ell(k) = slope * k + offset
  static LengthFunction affine(std::uint64_t slope, std::uint64_t offset);
  /// ell(k) = ceil(scale * k^exponent)
  static LengthFunction power(double scale, double exponent);
  /// ell(k) = ceil(exp(rate * k))
  static LengthFunction exponential(double rate);
  /// Explicit values for k = 0..values.size()-1. Beyond the table, Unspecified
  /// and Hold repeat the last value; Linear adds `slope` per step.
  static LengthFunction table(std::vector<std::uint64_t> values, Tail tail, std::uint64_t slope = 0);

  std::uint64_t operator()(std::uint64_t k) const;

  /// k -> max_{j <= k} ell(j); what the bounding processes work with.
  std::uint64_t envelope(std::uint64_t k) const;

  /// True when the envelope is bounded, in which case supremum() is its limit.
  bool bounded() const;
  std::uint64_t supremum() const;

  Kind kind() const { return kind_; }
  Tail tail() const { return tail_; }
  std::uint64_t slope() const { return slope_; }
  std::uint64_t offset() const { return offset_; }
  double scale() const { return scale_; }
  double exponent() const { return exponent_; }
  double rate() const { return rate_; }
  const std::vector<std::uint64_t>& values() const { return values_; }

  friend bool operator==(const LengthFunction&, const LengthFunction&) = default;

 private:
  explicit LengthFunction(Kind kind) : kind_(kind) {}

  Kind kind_;
  Tail tail_ = Tail::Unspecified;
  std::uint64_t slope_ = 0;
  std::uint64_t offset_ = 0;
  double scale_ = 0.0;
  double exponent_ = 0.0;
  double rate_ = 0.0;
  std::vector<std::uint64_t> values_;
  std::vector<std::uint64_t> prefix_max_;
};

}  // namespace vlmc
