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

#include "vlmc/model.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace vlmc {

std::optional<Symbol> Alphabet::find(char glyph) const {
  for (std::size_t i = 0; i < glyphs_.size(); ++i) {
    if (glyphs_[i] == glyph) {
      return Symbol{static_cast<std::uint8_t>(i)};
    }
  }
  return std::nullopt;
}

Word Alphabet::parse(std::string_view text) const {
  Word word;
  word.reserve(text.size());
  for (char c : text) {
    auto s = find(c);
    if (!s) {
      throw Error(ErrorCode::InvalidArgument, std::string("unknown symbol '") + c + "'");
    }
    word.push_back(*s);
  }
  return word;
}

Word Alphabet::parse_display(std::string_view text) const {
  Word word = parse(text);
  std::reverse(word.begin(), word.end());
  return word;
}

std::string Alphabet::format(WordView word) const {
  std::string out;
  out.reserve(word.size());
  for (Symbol s : word) {
    out.push_back(glyph(s));
  }
  return out;
}

std::string Alphabet::format_display(WordView word) const {
  std::string out = format(word);
  std::reverse(out.begin(), out.end());
  return out;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::EmptyAlphabet:
      return "EMPTY_ALPHABET";
    case ViolationKind::DuplicateSymbol:
      return "DUPLICATE_SYMBOL";
    case ViolationKind::EmptyRegularSet:
      return "EMPTY_REGULAR_SET";
    case ViolationKind::RegularNotPrefix:
      return "REGULAR_NOT_PREFIX";
    case ViolationKind::EmptyReference:
      return "EMPTY_REFERENCE";
    case ViolationKind::ReferenceNotRegular:
      return "REFERENCE_NOT_REGULAR";
    case ViolationKind::EpsilonRange:
      return "EPSILON_RANGE";
    case ViolationKind::VectorSize:
      return "VECTOR_SIZE";
    case ViolationKind::NegativeProbability:
      return "NEGATIVE_PROBABILITY";
    case ViolationKind::ProbabilitySum:
      return "PROBABILITY_SUM";
    case ViolationKind::EpsilonRegularity:
      return "EPSILON_REGULARITY";
    case ViolationKind::SuffixViolation:
      return "SUFFIX_VIOLATION";
    case ViolationKind::StructuralLaw:
      return "STRUCTURAL_LAW";
  }
  return "UNKNOWN";
}

ContextTreeModel::ContextTreeModel(Alphabet alphabet, Word reference, LengthFunction ell, TransitionRules rules)
    : alphabet_(std::move(alphabet)), reference_(std::move(reference)), ell_(std::move(ell)), rules_(std::move(rules)) {
  for (const auto& rule : rules_.by_context) {
    const std::size_t id = rule_vectors_.size();
    rule_vectors_.push_back(rule.probabilities);
    context_index_.emplace(rule.context, id);
    longest_key_ = std::max(longest_key_, rule.context.size());
    const std::uint64_t k = m_w(rule.context);
    if (k == kInfinite || context_length(k) != rule.context.size()) {
      lawless_keys_.push_back(rule.context);
    }
  }
  for (const auto& rule : rules_.by_distance) {
    rule_vectors_.push_back(rule.probabilities);
  }
  if (rules_.default_rule) {
    rule_vectors_.push_back(*rules_.default_rule);
  }
}

std::uint64_t ContextTreeModel::m_w(WordView v) const {
  const std::size_t wl = reference_.size();
  if (v.size() < wl) {
    return kInfinite;
  }
  for (std::size_t j = 0; j + wl <= v.size(); ++j) {
    const std::size_t start = v.size() - j - wl;
    if (std::equal(reference_.begin(), reference_.end(), v.begin() + static_cast<std::ptrdiff_t>(start))) {
      return j;
    }
  }
  return kInfinite;
}

std::uint64_t ContextTreeModel::context_length(std::uint64_t distance) const {
  if (distance == kInfinite) {
    return kInfinite;
  }
  return saturating_add(saturating_add(distance, reference_.size()), ell_(distance));
}

std::optional<ContextView> ContextTreeModel::context_of(WordView past) const {
  for (const auto& key : lawless_keys_) {
    if (is_suffix(key, past)) {
      throw Error(ErrorCode::ModelInconsistent,
                  "rule key \"" + alphabet_.format_display(key) + "\" matches but breaks the structural law");
    }
  }
  const std::uint64_t k = m_w(past);
  if (k == kInfinite) {
    return std::nullopt;
  }
  const std::uint64_t length = context_length(k);
  if (length > past.size()) {
    return std::nullopt;
  }
  return ContextView{past.last(static_cast<std::size_t>(length)), k};
}

std::size_t ContextTreeModel::rule_id(const ContextView& context) const {
  if (context.symbols.size() <= longest_key_) {
    if (auto it = context_index_.find(context.symbols); it != context_index_.end()) {
      return it->second;
    }
  }
  const std::size_t base = rules_.by_context.size();
  for (std::size_t i = 0; i < rules_.by_distance.size(); ++i) {
    const auto& rule = rules_.by_distance[i];
    if (rule.modulus == 0 && rule.residue == context.distance) {
      return base + i;
    }
  }
  for (std::size_t i = 0; i < rules_.by_distance.size(); ++i) {
    const auto& rule = rules_.by_distance[i];
    if (rule.modulus != 0 && rule.matches(context.distance)) {
      return base + i;
    }
  }
  if (rules_.default_rule) {
    return rule_vectors_.size() - 1;
  }
  throw Error(ErrorCode::NoRule, "no rule for context \"" + alphabet_.format_display(context.symbols) + "\"");
}

const ProbabilityVector& ContextTreeModel::transition_vector(WordView context) const {
  const std::uint64_t k = m_w(context);
  if (k == kInfinite || context_length(k) != context.size()) {
    throw Error(ErrorCode::ModelInconsistent,
                "\"" + alphabet_.format_display(context) + "\" is not a context of this tree");
  }
  return transition_vector(ContextView{context, k});
}

namespace {

constexpr double kSumTolerance = 1e-12;

void check_vector(const ContextTreeModel& model, const ProbabilityVector& p, const std::string& label,
                  std::vector<Violation>& out) {
  const Alphabet& alphabet = model.alphabet();
  if (p.size() != alphabet.size()) {
    out.push_back({ViolationKind::VectorSize, label + ": expected " + std::to_string(alphabet.size()) +
                                                  " probabilities, got " + std::to_string(p.size())});
    return;
  }
  double sum = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (!(p[a] >= 0.0)) {
      out.push_back({ViolationKind::NegativeProbability, label + ": p(" + alphabet.glyphs()[a] + ") < 0"});
    }
    sum += p[a];
  }
  if (!(std::abs(sum - 1.0) <= kSumTolerance)) {
    std::ostringstream os;
    os.precision(17);
    os << label << ": probabilities sum to " << sum;
    out.push_back({ViolationKind::ProbabilitySum, os.str()});
  }
  for (std::size_t a = 0; a < std::min(p.size(), alphabet.regular_count()); ++a) {
    if (p[a] < model.epsilon()) {
      std::ostringstream os;
      os << label << ": p(" << alphabet.glyphs()[a] << ") = " << p[a] << " < epsilon = " << model.epsilon();
      out.push_back({ViolationKind::EpsilonRegularity, os.str()});
    }
  }
}

}  // namespace

std::vector<Violation> validate(const ContextTreeModel& model) {
  std::vector<Violation> out;
  const Alphabet& alphabet = model.alphabet();
  if (alphabet.size() == 0) {
    out.push_back({ViolationKind::EmptyAlphabet, "alphabet has no symbols"});
    return out;
  }
  std::set<char> seen;
  for (char g : alphabet.glyphs()) {
    if (!seen.insert(g).second) {
      out.push_back({ViolationKind::DuplicateSymbol, std::string("symbol '") + g + "' listed twice"});
    }
  }
  if (alphabet.regular_count() == 0) {
    out.push_back({ViolationKind::EmptyRegularSet, "no epsilon-regular symbol declared"});
  } else if (alphabet.regular_count() > alphabet.size()) {
    out.push_back({ViolationKind::RegularNotPrefix, "more regular symbols than alphabet symbols"});
  }

  const double eps = model.epsilon();
  if (!(eps > 0.0 && eps <= 1.0)) {
    out.push_back({ViolationKind::EpsilonRange, "epsilon must lie in (0, 1]"});
  } else if (static_cast<double>(alphabet.regular_count()) * eps > 1.0 + kSumTolerance) {
    out.push_back({ViolationKind::EpsilonRange, "regular symbols times epsilon exceeds 1"});
  }

  if (model.reference().empty()) {
    out.push_back({ViolationKind::EmptyReference, "reference string is empty"});
  }
  for (Symbol s : model.reference()) {
    if (s.index >= alphabet.size() || !alphabet.is_regular(s)) {
      out.push_back({ViolationKind::ReferenceNotRegular, "reference string uses a symbol that is not epsilon-regular"});
      break;
    }
  }

  const auto& rules = model.rules();
  for (const auto& rule : rules.by_context) {
    bool in_range = true;
    for (Symbol s : rule.context) {
      in_range = in_range && s.index < alphabet.size();
    }
    const std::string label = in_range ? "rule \"" + alphabet.format_display(rule.context) + "\"" : "rule <bad symbol>";
    check_vector(model, rule.probabilities, label, out);
    if (!in_range || model.reference().empty()) {
      continue;
    }
    const std::uint64_t k = model.m_w(rule.context);
    if (k == kInfinite) {
      out.push_back({ViolationKind::StructuralLaw, label + ": key does not contain the reference string"});
    } else if (model.context_length(k) != rule.context.size()) {
      out.push_back({ViolationKind::StructuralLaw,
                     label + ": length " + std::to_string(rule.context.size()) + " but distance " + std::to_string(k) +
                         " requires " + std::to_string(model.context_length(k))});
    }
  }
  for (std::size_t i = 0; i < rules.by_context.size(); ++i) {
    for (std::size_t j = 0; j < rules.by_context.size(); ++j) {
      const auto& a = rules.by_context[i].context;
      const auto& b = rules.by_context[j].context;
      if (i != j && is_suffix(a, b) && (a.size() < b.size() || i < j)) {
        out.push_back({ViolationKind::SuffixViolation, "rule \"" + alphabet.format_display(a) +
                                                           "\" is a suffix of rule \"" + alphabet.format_display(b) + "\""});
      }
    }
  }
  for (const auto& rule : rules.by_distance) {
    std::string label = "distance rule " + std::to_string(rule.residue);
    if (rule.modulus != 0) {
      label += " mod " + std::to_string(rule.modulus);
    }
    check_vector(model, rule.probabilities, label, out);
  }
  if (rules.default_rule) {
    check_vector(model, *rules.default_rule, "default rule", out);
  }
  return out;
}

double c_epsilon(double epsilon, std::size_t reference_length) {
  if (epsilon >= 1.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double power = std::pow(epsilon, static_cast<double>(reference_length));
  return -std::log1p(-power) / static_cast<double>(reference_length);
}

double c_epsilon(const ContextTreeModel& model) { return c_epsilon(model.epsilon(), model.reference().size()); }

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "UNKNOWN";
}

RateConditionReport check_rate_condition(const ContextTreeModel& model, std::uint64_t horizon) {
  RateConditionReport report;
  report.c_epsilon = c_epsilon(model);
  const LengthFunction& ell = model.ell();
  for (std::uint64_t k = 1; k <= horizon; ++k) {
    const std::uint64_t value = ell.envelope(k);
    const double log_value = value == 0 ? -std::numeric_limits<double>::infinity()
                                        : std::log(static_cast<double>(value));
    report.ratios.push_back(log_value / (report.c_epsilon * static_cast<double>(k)));
  }
  if (std::isinf(report.c_epsilon)) {
    report.verdict = Verdict::Pass;
    report.reason = "epsilon = 1: every symbol is spontaneous";
    return report;
  }
  using Kind = LengthFunction::Kind;
  switch (ell.kind()) {
    case Kind::Zero:
      report.verdict = Verdict::Pass;
      report.reason = "ell is identically 0 (log 0 = -inf)";
      break;
    case Kind::Identity:
    case Kind::Affine:
    case Kind::Power:
      report.verdict = Verdict::Pass;
      report.reason = "ell grows sub-exponentially, limsup = 0";
      break;
    case Kind::Exponential: {
      const double limsup = ell.rate() / report.c_epsilon;
      report.verdict = limsup < 1.0 ? Verdict::Pass : Verdict::Fail;
      std::ostringstream os;
      os << "exponential growth: limsup = rate / C_eps = " << limsup;
      report.reason = os.str();
      break;
    }
    case Kind::Table:
      if (ell.tail() == LengthFunction::Tail::Unspecified) {
        report.verdict = Verdict::Inconclusive;
        report.reason = "table without a declared tail rule; see the empirical ratios";
      } else {
        report.verdict = Verdict::Pass;
        report.reason = "table with a bounded or linear tail, limsup = 0";
      }
      break;
  }
  return report;
}

}  // namespace vlmc
