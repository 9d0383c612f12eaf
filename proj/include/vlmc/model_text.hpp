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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vlmc/model.hpp"

namespace vlmc {

/// Syntax error at a 1-based line and column.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/// A well-formed document whose model breaks an invariant.
class SemanticError : public std::runtime_error {
 public:
  explicit SemanticError(std::vector<Violation> violations);

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Parses the line-oriented model format:
///
///   alphabet = 1 2
///   regular  = 1 2
///   epsilon  = 0.2
///   w        = "2"
///   ell      = identity | zero | affine A B | power C ALPHA | exp R
///            | table [v0, v1, ...] [tail hold | tail linear S]
///   rule "121" = 0.7 0.3          # key written most recent symbol first
///   rule distance 3 = 0.5 0.5
///   rule distance 1 mod 2 = 0.7 0.3
///   default  = 0.5 0.5
///
/// w is written oldest symbol first. Throws ParseError or SemanticError.
ContextTreeModel parse_model(std::string_view text);

/// Canonical text; parse_model(print_model(m)) == m.
std::string print_model(const ContextTreeModel& model);

ContextTreeModel load_model_file(const std::string& path);

/// FNV-1a hash of the canonical text, as 16 hex digits.
std::string model_hash(const ContextTreeModel& model);

}  // namespace vlmc
