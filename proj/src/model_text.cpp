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

#include "vlmc/model_text.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace vlmc {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

namespace {

std::string describe(const std::vector<Violation>& violations) {
  std::string out = "model is inconsistent:";
  for (const auto& v : violations) {
    out += "\n  ";
    out += to_string(v.kind);
    out += ": ";
    out += v.detail;
  }
  return out;
}

bool reserved(char c) {
  return std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '#' || c == '=' || c == ',' || c == '[' ||
         c == ']';
}

class Cursor {
 public:
  Cursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }
  bool done() {
    skip_space();
    return pos_ >= text_.size();
  }
  std::size_t column() const { return pos_ + 1; }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(line_, column(), message); }
  [[noreturn]] void fail_at(std::size_t column, const std::string& message) const {
    throw ParseError(line_, column, message);
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }
  void expect_end() {
    if (!done()) {
      fail("unexpected text '" + std::string(text_.substr(pos_)) + "'");
    }
  }

  /// Run of characters up to whitespace or a reserved character.
  std::string_view word() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !reserved(text_[pos_])) {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  std::string_view identifier(const char* what) {
    const std::size_t at = (skip_space(), column());
    const auto w = word();
    if (w.empty()) {
      fail_at(at, std::string("expected ") + what);
    }
    return w;
  }

  std::string quoted() {
    skip_space();
    if (!peek('"')) {
      fail("expected a quoted string");
    }
    const std::size_t start = ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      ++pos_;
    }
    if (pos_ >= text_.size()) {
      fail_at(start, "unterminated string");
    }
    return std::string(text_.substr(start, pos_++ - start));
  }

  double number() {
    const std::size_t at = (skip_space(), column());
    const auto w = word();
    double value = 0.0;
    const auto [end, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
    if (w.empty() || ec != std::errc() || end != w.data() + w.size()) {
      fail_at(at, "expected a number, got '" + std::string(w) + "'");
    }
    return value;
  }

  std::uint64_t integer() {
    const std::size_t at = (skip_space(), column());
    const auto w = word();
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
    if (w.empty() || ec != std::errc() || end != w.data() + w.size()) {
      fail_at(at, "expected a non-negative integer, got '" + std::string(w) + "'");
    }
    return value;
  }

  std::size_t line() const { return line_; }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

// Drops a trailing comment, ignoring '#' inside quotes.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t j = 0; j < line.size(); ++j) {
    if (line[j] == '"') {
      quoted = !quoted;
    } else if (line[j] == '#' && !quoted) {
      return line.substr(0, j);
    }
  }
  return line;
}

struct Draft {
  std::optional<std::vector<char>> glyphs;
  std::optional<std::vector<char>> regular;
  std::size_t regular_line = 0;
  std::optional<double> epsilon;
  std::optional<std::string> reference;
  std::size_t reference_line = 0;
  std::size_t reference_column = 0;
  std::optional<LengthFunction> ell;
  struct PendingRule {
    std::string key;
    std::size_t line;
    std::size_t column;
    ProbabilityVector probabilities;
  };
  std::vector<PendingRule> context_rules;
  std::vector<DistanceRule> distance_rules;
  std::optional<ProbabilityVector> default_rule;
};

ProbabilityVector probabilities(Cursor& in) {
  ProbabilityVector p;
  while (!in.done()) {
    p.push_back(in.number());
  }
  if (p.empty()) {
    in.fail("expected a probability vector");
  }
  return p;
}

std::vector<char> glyph_list(Cursor& in) {
  std::vector<char> glyphs;
  while (!in.done()) {
    const std::size_t at = in.column();
    const auto w = in.word();
    if (w.size() != 1) {
      in.fail_at(at, w.empty() ? "invalid symbol" : "symbols are single characters, got '" + std::string(w) + "'");
    }
    glyphs.push_back(w.front());
  }
  if (glyphs.empty()) {
    in.fail("expected at least one symbol");
  }
  return glyphs;
}

LengthFunction length_function(Cursor& in) {
  const std::size_t at = (in.skip_space(), in.column());
  const auto kind = in.identifier("a length function kind");
  LengthFunction ell = LengthFunction::zero();
  if (kind == "zero") {
  } else if (kind == "identity") {
    ell = LengthFunction::identity();
  } else if (kind == "affine") {
    const std::uint64_t slope = in.integer();
    const std::uint64_t offset = in.integer();
    ell = LengthFunction::affine(slope, offset);
  } else if (kind == "power" || kind == "exp") {
    const std::size_t args = (in.skip_space(), in.column());
    try {
      if (kind == "power") {
        const double scale = in.number();
        const double exponent = in.number();
        ell = LengthFunction::power(scale, exponent);
      } else {
        ell = LengthFunction::exponential(in.number());
      }
    } catch (const Error& e) {
      in.fail_at(args, e.what());
    }
  } else if (kind == "table") {
    in.expect('[');
    std::vector<std::uint64_t> values;
    while (!in.peek(']')) {
      if (!values.empty()) {
        in.expect(',');
      }
      values.push_back(in.integer());
    }
    in.expect(']');
    if (values.empty()) {
      in.fail("length table is empty");
    }
    auto tail = LengthFunction::Tail::Unspecified;
    std::uint64_t slope = 0;
    if (!in.done()) {
      const auto keyword = in.identifier("'tail'");
      if (keyword != "tail") {
        in.fail("expected 'tail'");
      }
      const std::size_t rule_at = (in.skip_space(), in.column());
      const auto rule = in.identifier("a tail rule");
      if (rule == "hold") {
        tail = LengthFunction::Tail::Hold;
      } else if (rule == "linear") {
        tail = LengthFunction::Tail::Linear;
        slope = in.integer();
      } else {
        in.fail_at(rule_at, "unknown tail rule '" + std::string(rule) + "'");
      }
    }
    ell = LengthFunction::table(std::move(values), tail, slope);
  } else {
    in.fail_at(at, "unknown length function '" + std::string(kind) + "'");
  }
  in.expect_end();
  return ell;
}

void parse_line(Cursor& in, Draft& draft, std::set<std::string>& seen) {
  const std::size_t at = (in.skip_space(), in.column());
  const std::string key(in.identifier("a key"));
  auto once = [&] {
    if (!seen.insert(key).second) {
      in.fail_at(at, "'" + key + "' given twice");
    }
  };
  if (key == "rule") {
    const std::size_t key_at = (in.skip_space(), in.column());
    if (in.peek('"')) {
      std::string context = in.quoted();
      in.expect('=');
      draft.context_rules.push_back({std::move(context), in.line(), key_at + 1, probabilities(in)});
      return;
    }
    if (in.identifier("a quoted context or 'distance'") != "distance") {
      in.fail_at(key_at, "expected a quoted context or 'distance'");
    }
    DistanceRule rule;
    rule.residue = in.integer();
    if (!in.peek('=')) {
      const std::size_t mod_at = (in.skip_space(), in.column());
      if (in.identifier("'mod' or '='") != "mod") {
        in.fail_at(mod_at, "expected 'mod' or '='");
      }
      rule.modulus = in.integer();
      if (rule.modulus == 0) {
        in.fail("modulus must be positive");
      }
      if (rule.residue >= rule.modulus) {
        in.fail("residue must be smaller than the modulus");
      }
    }
    in.expect('=');
    rule.probabilities = probabilities(in);
    draft.distance_rules.push_back(std::move(rule));
    return;
  }

  once();
  in.expect('=');
  if (key == "alphabet") {
    draft.glyphs = glyph_list(in);
  } else if (key == "regular") {
    draft.regular_line = in.line();
    draft.regular = glyph_list(in);
  } else if (key == "epsilon") {
    draft.epsilon = in.number();
    in.expect_end();
  } else if (key == "w") {
    in.skip_space();
    draft.reference_line = in.line();
    draft.reference_column = in.column() + 1;
    draft.reference = in.quoted();
    in.expect_end();
  } else if (key == "ell") {
    draft.ell = length_function(in);
  } else if (key == "default") {
    draft.default_rule = probabilities(in);
  } else {
    in.fail_at(at, "unknown key '" + key + "'");
  }
}

Word symbols_of(const Alphabet& alphabet, const std::string& text, std::size_t line, std::size_t column) {
  for (std::size_t j = 0; j < text.size(); ++j) {
    if (!alphabet.find(text[j])) {
      throw ParseError(line, column + j, std::string("symbol '") + text[j] + "' is not in the alphabet");
    }
  }
  return alphabet.parse(text);
}

std::string format_number(double x) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, end);
}

void append_vector(std::string& out, const ProbabilityVector& p) {
  for (std::size_t a = 0; a < p.size(); ++a) {
    out += a == 0 ? "" : " ";
    out += format_number(p[a]);
  }
  out += '\n';
}

}  // namespace

SemanticError::SemanticError(std::vector<Violation> violations)
    : std::runtime_error(describe(violations)), violations_(std::move(violations)) {}

ContextTreeModel parse_model(std::string_view text) {
  Draft draft;
  std::set<std::string> seen;
  std::size_t line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    ++line;
    std::string_view content = strip_comment(text.substr(start, end - start));
    if (!content.empty() && content.back() == '\r') {
      content.remove_suffix(1);
    }
    Cursor in(content, line);
    if (!in.done()) {
      parse_line(in, draft, seen);
    }
    start = end + 1;
  }

  const std::size_t eof = line;
  auto require = [&](bool present, const char* key) {
    if (!present) {
      throw ParseError(eof, 1, std::string("missing '") + key + "'");
    }
  };
  require(draft.glyphs.has_value(), "alphabet");
  require(draft.regular.has_value(), "regular");
  require(draft.epsilon.has_value(), "epsilon");
  require(draft.reference.has_value(), "w");
  require(draft.ell.has_value(), "ell");

  const std::vector<char>& glyphs = *draft.glyphs;
  const std::vector<char>& regular = *draft.regular;
  std::vector<Violation> early;
  for (const char g : regular) {
    if (std::find(glyphs.begin(), glyphs.end(), g) == glyphs.end()) {
      throw ParseError(draft.regular_line, 1, std::string("regular symbol '") + g + "' is not in the alphabet");
    }
  }
  if (regular.size() > glyphs.size() || !std::equal(regular.begin(), regular.end(), glyphs.begin())) {
    early.push_back({ViolationKind::RegularNotPrefix, "regular symbols must be the first symbols of the alphabet"});
  }
  const Alphabet alphabet(glyphs, early.empty() ? regular.size() : 0);
  const Word reference = symbols_of(alphabet, *draft.reference, draft.reference_line, draft.reference_column);

  TransitionRules rules;
  rules.epsilon = *draft.epsilon;
  for (auto& rule : draft.context_rules) {
    Word context = symbols_of(alphabet, rule.key, rule.line, rule.column);
    std::reverse(context.begin(), context.end());
    rules.by_context.push_back({std::move(context), std::move(rule.probabilities)});
  }
  rules.by_distance = std::move(draft.distance_rules);
  rules.default_rule = std::move(draft.default_rule);

  ContextTreeModel model(alphabet, reference, *draft.ell, std::move(rules));
  auto violations = validate(model);
  violations.insert(violations.begin(), early.begin(), early.end());
  if (!violations.empty()) {
    throw SemanticError(std::move(violations));
  }
  return model;
}

std::string print_model(const ContextTreeModel& model) {
  const Alphabet& alphabet = model.alphabet();
  std::string out = "alphabet =";
  for (const char g : alphabet.glyphs()) {
    out += ' ';
    out += g;
  }
  out += "\nregular =";
  for (std::size_t a = 0; a < alphabet.regular_count(); ++a) {
    out += ' ';
    out += alphabet.glyphs()[a];
  }
  out += "\nepsilon = " + format_number(model.epsilon());
  out += "\nw = \"" + alphabet.format(model.reference()) + "\"\nell = ";
  const LengthFunction& ell = model.ell();
  switch (ell.kind()) {
    case LengthFunction::Kind::Zero:
      out += "zero";
      break;
    case LengthFunction::Kind::Identity:
      out += "identity";
      break;
    case LengthFunction::Kind::Affine:
      out += "affine " + std::to_string(ell.slope()) + " " + std::to_string(ell.offset());
      break;
    case LengthFunction::Kind::Power:
      out += "power " + format_number(ell.scale()) + " " + format_number(ell.exponent());
      break;
    case LengthFunction::Kind::Exponential:
      out += "exp " + format_number(ell.rate());
      break;
    case LengthFunction::Kind::Table:
      out += "table [";
      for (std::size_t k = 0; k < ell.values().size(); ++k) {
        out += (k == 0 ? "" : ", ") + std::to_string(ell.values()[k]);
      }
      out += "]";
      if (ell.tail() == LengthFunction::Tail::Hold) {
        out += " tail hold";
      } else if (ell.tail() == LengthFunction::Tail::Linear) {
        out += " tail linear " + std::to_string(ell.slope());
      }
      break;
  }
  out += '\n';
  for (const auto& rule : model.rules().by_context) {
    out += "rule \"" + alphabet.format_display(rule.context) + "\" = ";
    append_vector(out, rule.probabilities);
  }
  for (const auto& rule : model.rules().by_distance) {
    out += "rule distance " + std::to_string(rule.residue);
    if (rule.modulus != 0) {
      out += " mod " + std::to_string(rule.modulus);
    }
    out += " = ";
    append_vector(out, rule.probabilities);
  }
  if (model.rules().default_rule) {
    out += "default = ";
    append_vector(out, *model.rules().default_rule);
  }
  return out;
}

ContextTreeModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::InvalidArgument, "cannot open model file " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_model(text.str());
}

std::string model_hash(const ContextTreeModel& model) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : print_model(model)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

}  // namespace vlmc
