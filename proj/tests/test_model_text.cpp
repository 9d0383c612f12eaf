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

#include <doctest.h>

#include "support.hpp"
#include "vlmc/model_text.hpp"

using namespace vlmc;
using vlmc::testing::example_model;

namespace {

const char* kMinimal = R"(alphabet = 1 2
regular = 1 2
epsilon = 0.2
w = "2"
ell = identity
default = 0.5 0.5
)";

template <class F>
ParseError parse_error_of(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected ParseError");
  return ParseError(0, 0, "");
}

}  // namespace

TEST_CASE("parses the worked model") {
  const auto model = example_model("worked");
  CHECK(model.alphabet().size() == 2);
  CHECK(model.epsilon() == 0.2);
  CHECK(model.alphabet().format(model.reference()) == "2");
  CHECK(model.ell().kind() == LengthFunction::Kind::Identity);
  REQUIRE(model.rules().by_context.size() == 5);
  // keys are stored in time order
  CHECK(model.alphabet().format(model.rules().by_context[1].context) == "121");
  CHECK(model.alphabet().format(model.rules().by_context[3].context) == "11211");
  CHECK(model.alphabet().format(model.rules().by_context[4].context) == "2112111");
}

TEST_CASE("every length kind and rule kind round-trips") {
  const char* texts[] = {
      kMinimal,
      "alphabet = a b\nregular = a\nepsilon = 0.25\nw = \"a\"\nell = zero\nrule distance 3 = 0.5 0.5\n"
      "rule distance 1 mod 2 = 0.7 0.3\ndefault = 0.4 0.6\n",
      "alphabet = x y z\nregular = x y z\nepsilon = 0.1\nw = \"xy\"\nell = affine 2 3\ndefault = 0.3 0.3 0.4\n",
      "alphabet = 1 2\nregular = 1 2\nepsilon = 0.1\nw = \"21\"\nell = power 1.5 0.75\ndefault = 0.5 0.5\n",
      "alphabet = 1 2\nregular = 1 2\nepsilon = 0.1\nw = \"2\"\nell = exp 0.01\ndefault = 0.5 0.5\n",
      "alphabet = 1 2\nregular = 1 2\nepsilon = 0.1\nw = \"2\"\nell = table [0, 1, 1, 5] tail linear 2\n"
      "default = 0.5 0.5\n",
      "alphabet = 1 2\nregular = 1 2\nepsilon = 0.1\nw = \"2\"\nell = table [0, 3]\ndefault = 0.5 0.5\n",
  };
  for (const char* text : texts) {
    CAPTURE(text);
    const auto model = parse_model(text);
    const std::string printed = print_model(model);
    const auto again = parse_model(printed);
    CHECK(again == model);
    CHECK(print_model(again) == printed);
    CHECK(model_hash(again) == model_hash(model));
  }
  for (const char* name : vlmc::testing::kExampleModels) {
    const auto model = example_model(name);
    CHECK(parse_model(print_model(model)) == model);
  }
}

TEST_CASE("probabilities round-trip bit for bit") {
  const auto model = parse_model(
      "alphabet = 1 2 3\nregular = 1 2 3\nepsilon = 0.1\nw = \"2\"\nell = zero\n"
      "default = 0.1 0.2 0.7000000000000001\n");
  CHECK(parse_model(print_model(model)).rules().default_rule == model.rules().default_rule);
}

TEST_CASE("hash tracks content") {
  const auto a = example_model("worked");
  const auto b = example_model("renewal");
  CHECK(model_hash(a).size() == 16);
  CHECK(model_hash(a) != model_hash(b));
  CHECK(model_hash(a) == model_hash(example_model("worked")));
}

TEST_CASE("comments and blank lines are ignored") {
  const std::string text = std::string("# header\n\n") + kMinimal + "  # trailing\n";
  CHECK(parse_model(text) == parse_model(kMinimal));
}

TEST_CASE("syntax errors carry a position") {
  const auto e = parse_error_of([] { parse_model("alphabet = 1 2\nregular = 1 2\nepsilon = zero\n"); });
  CHECK(e.line() == 3);
  CHECK(e.column() >= 1);

  parse_error_of([] { parse_model("alphabet = 1 2\nbogus = 3\n"); });
  parse_error_of([] { parse_model("alphabet = 1 2\nregular = 1 2\nepsilon = 0.2\nw = 2\n"); });
  parse_error_of([] { parse_model("alphabet = 1 2\nregular = 1 2\nepsilon = 0.2\nw = \"2\"\nell = cubic\n"); });
  parse_error_of([] { parse_model("alphabet = 1 2\nregular = 1 2\nepsilon = 0.2\nw = \"2\"\n"); });
  parse_error_of([] { parse_model(std::string(kMinimal) + "rule \"9\" = 0.5 0.5\n"); });
}

TEST_CASE("semantic errors list the violations") {
  try {
    parse_model("alphabet = 1 2\nregular = 1 2\nepsilon = 0.2\nw = \"2\"\nell = identity\ndefault = 0.5 0.4\n");
    FAIL("expected SemanticError");
  } catch (const SemanticError& e) {
    REQUIRE_FALSE(e.violations().empty());
    CHECK(e.violations().front().kind == ViolationKind::ProbabilitySum);
  }
  try {
    parse_model("alphabet = 1 2\nregular = 2\nepsilon = 0.2\nw = \"2\"\nell = zero\ndefault = 0.5 0.5\n");
    FAIL("expected SemanticError");
  } catch (const SemanticError& e) {
    CHECK(e.violations().front().kind == ViolationKind::RegularNotPrefix);
  }
}

TEST_CASE("missing file") {
  CHECK_THROWS(load_model_file("/nonexistent/model.vlmc"));
}
