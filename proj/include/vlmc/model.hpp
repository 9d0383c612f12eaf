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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vlmc/length_function.hpp"
#include "vlmc/symbols.hpp"

namespace vlmc {

/// Finite ordered alphabet. The first regular_count() symbols form the set of
/// epsilon-regular symbols.
class Alphabet {
 public:
  Alphabet() = default;
  Alphabet(std::vector<char> glyphs, std::size_t regular_count)
      : glyphs_(std::move(glyphs)), regular_count_(regular_count) {}

  std::size_t size() const { return glyphs_.size(); }
  std::size_t regular_count() const { return regular_count_; }
  bool is_regular(Symbol s) const { return s.index < regular_count_; }
  char glyph(Symbol s) const { return glyphs_.at(s.index); }
  const std::vector<char>& glyphs() const { return glyphs_; }
  std::optional<Symbol> find(char glyph) const;

  /// Parses glyphs written oldest first.
  Word parse(std::string_view text) const;
  /// Parses a context written most-recent-symbol first and returns it in time order.
  Word parse_display(std::string_view text) const;
  std::string format(WordView word) const;
  std::string format_display(WordView word) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<char> glyphs_;
  std::size_t regular_count_ = 0;
};

using ProbabilityVector = std::vector<double>;

/// Rule keyed on the distance k to the last occurrence of the reference
/// string. modulus == 0 matches k == residue exactly; otherwise it matches
/// every k with k % modulus == residue.
struct DistanceRule {
  std::uint64_t residue = 0;
  std::uint64_t modulus = 0;
  ProbabilityVector probabilities;

  bool matches(std::uint64_t k) const { return modulus == 0 ? k == residue : k % modulus == residue; }

  friend bool operator==(const DistanceRule&, const DistanceRule&) = default;
};

struct ContextRule {
  Word context;  // time order
  ProbabilityVector probabilities;

  friend bool operator==(const ContextRule&, const ContextRule&) = default;
};

struct TransitionRules {
  double epsilon = 0.0;
  std::vector<ContextRule> by_context;
  std::vector<DistanceRule> by_distance;
  std::optional<ProbabilityVector> default_rule;

  friend bool operator==(const TransitionRules&, const TransitionRules&) = default;
};

enum class ViolationKind {
  EmptyAlphabet,
  DuplicateSymbol,
  EmptyRegularSet,
  RegularNotPrefix,
  EmptyReference,
  ReferenceNotRegular,
  EpsilonRange,
  VectorSize,
  NegativeProbability,
  ProbabilitySum,
  EpsilonRegularity,
  SuffixViolation,
  StructuralLaw,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
};

/// A context found as a suffix of some past: the last `symbols.size()`
/// symbols of that past, whose last reference occurrence sits `distance`
/// symbols before its end.
struct ContextView {
  WordView symbols;
  std::uint64_t distance = 0;
};

/// Probabilistic context tree given by a reference string w and a length
/// function: every context v containing w satisfies
/// |v| = m(v) + |w| + ell(m(v)), and branches without w are infinite.
///
/// Construction performs no validation; call validate() before use. The
/// object is immutable afterwards.
class ContextTreeModel {
 public:
  ContextTreeModel(Alphabet alphabet, Word reference, LengthFunction ell, TransitionRules rules);

  const Alphabet& alphabet() const { return alphabet_; }
  const Word& reference() const { return reference_; }
  const LengthFunction& ell() const { return ell_; }
  const TransitionRules& rules() const { return rules_; }
  double epsilon() const { return rules_.epsilon; }

  /// Distance from the end of v to the last occurrence of w in v, kInfinite if absent.
  std::uint64_t m_w(WordView v) const;

  /// m + |w| + ell(m), saturating.
  std::uint64_t context_length(std::uint64_t distance) const;

  /// The context that is a suffix of `past`, or nullopt when the past is too
  /// short to determine one. Throws ModelInconsistent when a stored rule key
  /// that breaks the structural law is a suffix of `past`.
  std::optional<ContextView> context_of(WordView past) const;

  /// Rules are numbered: context rules, then distance rules, then the default.
  std::size_t rule_count() const { return rule_vectors_.size(); }
  const ProbabilityVector& rule(std::size_t id) const { return rule_vectors_.at(id); }
  /// Throws NoRule when nothing matches and no default is declared.
  std::size_t rule_id(const ContextView& context) const;

  const ProbabilityVector& transition_vector(const ContextView& context) const { return rule(rule_id(context)); }
  /// Looks up a full context string; throws ModelInconsistent unless it
  /// satisfies the structural law.
  const ProbabilityVector& transition_vector(WordView context) const;

  friend bool operator==(const ContextTreeModel& a, const ContextTreeModel& b) {
    return a.alphabet_ == b.alphabet_ && a.reference_ == b.reference_ && a.ell_ == b.ell_ && a.rules_ == b.rules_;
  }

 private:
  Alphabet alphabet_;
  Word reference_;
  LengthFunction ell_;
  TransitionRules rules_;

  std::map<Word, std::size_t, WordLess> context_index_;
  std::size_t longest_key_ = 0;
  std::vector<Word> lawless_keys_;
  std::vector<ProbabilityVector> rule_vectors_;
};

/// Empty iff every model invariant holds.
std::vector<Violation> validate(const ContextTreeModel& model);

/// -log(1 - eps^|w|) / |w|; +infinity when eps == 1.
double c_epsilon(double epsilon, std::size_t reference_length);
double c_epsilon(const ContextTreeModel& model);

enum class Verdict { Pass, Fail, Inconclusive };

std::string_view to_string(Verdict verdict);

struct RateConditionReport {
  Verdict verdict = Verdict::Inconclusive;
  double c_epsilon = 0.0;
  /// log(ell(k)) / (C_eps k) for k = 1..horizon (-inf where ell(k) == 0).
  std::vector<double> ratios;
  std::string reason;
};

/// Decides limsup log(ell(k)) / (C_eps k) < 1, the growth condition under
/// which the backward search terminates almost surely.
RateConditionReport check_rate_condition(const ContextTreeModel& model, std::uint64_t horizon);

}  // namespace vlmc
