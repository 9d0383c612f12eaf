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

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vlmc {

/// Index of a symbol in its alphabet's ordered list.
struct Symbol {
  std::uint8_t index = 0;

  friend constexpr auto operator<=>(Symbol, Symbol) = default;
};

/// Finite string in time order: front() is the oldest symbol, back() the most
/// recent one.
using Word = std::vector<Symbol>;
using WordView = std::span<const Symbol>;

/// Stand-in for +infinity in distances and context lengths.
inline constexpr std::uint64_t kInfinite = std::numeric_limits<std::uint64_t>::max();

constexpr std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > kInfinite - b ? kInfinite : a + b;
}

constexpr std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) {
    return 0;
  }
  return a > kInfinite / b ? kInfinite : a * b;
}

inline bool is_suffix(WordView suffix, WordView word) {
  return suffix.size() <= word.size() &&
         std::equal(suffix.begin(), suffix.end(), word.end() - static_cast<std::ptrdiff_t>(suffix.size()));
}

/// Lexicographic order usable for heterogeneous lookup of views in maps keyed by Word.
struct WordLess {
  using is_transparent = void;
  bool operator()(WordView a, WordView b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

enum class ErrorCode {
  InvalidArgument,
  ModelInconsistent,
  NoRule,
  NegativeWidth,
  IndexNotCovered,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vlmc
