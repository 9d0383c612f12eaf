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

#include <cmath>

#include "support.hpp"
#include "vlmc/model.hpp"

using namespace vlmc;
using vlmc::testing::example_model;

namespace {

// Alphabet "1 2", both regular, reference "2".
ContextTreeModel two_symbol(LengthFunction ell, std::vector<ContextRule> rules, double epsilon = 0.2) {
  TransitionRules r;
  r.epsilon = epsilon;
  r.by_context = std::move(rules);
  r.default_rule = ProbabilityVector{0.5, 0.5};
  const Alphabet alphabet({'1', '2'}, 2);
  return ContextTreeModel(alphabet, alphabet.parse("2"), std::move(ell), std::move(r));
}

bool has(const std::vector<Violation>& vs, ViolationKind kind) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.kind == kind; });
}

}  // namespace

TEST_CASE("distance to the last reference occurrence") {
  const auto model = two_symbol(LengthFunction::identity(), {});
  const Alphabet& a = model.alphabet();
  CHECK(model.m_w(a.parse("21")) == 1);
  CHECK(model.m_w(a.parse("111")) == kInfinite);
  CHECK(model.m_w(Word{}) == kInfinite);
  // c 2 1^i has distance i
  for (std::uint64_t i = 0; i < 6; ++i) {
    Word v = a.parse("1122");
    v.insert(v.end(), i, a.parse("1").front());
    CHECK(model.m_w(v) == i);
  }
}

TEST_CASE("contexts and transition vectors of the worked model") {
  const auto model = example_model("worked");
  const Alphabet& a = model.alphabet();

  const Word p1 = a.parse("1112");
  const Word p2 = a.parse("221");
  const Word p3 = a.parse("2211211");
  const auto after_two = model.context_of(p1);
  REQUIRE(after_two);
  CHECK(a.format_display(after_two->symbols) == "2");
  CHECK(model.transition_vector(*after_two) == ProbabilityVector{0.3, 0.7});

  const auto c122 = model.context_of(p2);
  REQUIRE(c122);
  CHECK(a.format_display(c122->symbols) == "122");
  CHECK(model.transition_vector(*c122)[1] == doctest::Approx(0.5));

  const auto c11211 = model.context_of(p3);
  REQUIRE(c11211);
  CHECK(a.format_display(c11211->symbols) == "11211");
  CHECK(model.transition_vector(*c11211) == ProbabilityVector{0.7, 0.3});

  CHECK_FALSE(model.context_of(a.parse("11")));
  // 2 then one 1 needs three symbols
  CHECK_FALSE(model.context_of(a.parse("21")));
  CHECK_FALSE(model.context_of(Word{}));

  // a context is a suffix of the past
  const Word past = a.parse("12121121");
  const auto c = model.context_of(past);
  REQUIRE(c);
  CHECK(is_suffix(c->symbols, past));
  CHECK(c->symbols.size() == model.context_length(c->distance));
}

TEST_CASE("transition vector by full context string") {
  const auto model = example_model("worked");
  CHECK(model.transition_vector(model.alphabet().parse_display("1112112"))[1] == doctest::Approx(0.5));
  CHECK(model.transition_vector(model.alphabet().parse_display("111121111"))[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(model.transition_vector(model.alphabet().parse_display("12")), Error);
}

TEST_CASE("constant model predicts epsilon everywhere") {
  const auto model = example_model("sweep");
  const Alphabet& a = model.alphabet();
  for (const char* text : {"2", "21", "1211", "2111111"}) {
    const Word past = a.parse(text);
    const auto c = model.context_of(past);
    if (c) {
      CHECK(model.transition_vector(*c) == ProbabilityVector{0.2, 0.8});
    }
  }
}

TEST_CASE("missing rule is reported at lookup") {
  TransitionRules r;
  r.epsilon = 0.2;
  r.by_context.push_back({Alphabet({'1', '2'}, 2).parse("2"), {0.3, 0.7}});
  const Alphabet alphabet({'1', '2'}, 2);
  const ContextTreeModel model(alphabet, alphabet.parse("2"), LengthFunction::identity(), r);
  const Word past = alphabet.parse("2221");
  const auto c = model.context_of(past);
  REQUIRE(c);
  try {
    model.rule_id(*c);
    FAIL("expected NoRule");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoRule);
  }
}

TEST_CASE("a stored key that breaks the structural law is inconsistent") {
  const Alphabet alphabet({'1', '2'}, 2);
  TransitionRules r;
  r.epsilon = 0.2;
  r.by_context.push_back({alphabet.parse_display("21"), {0.5, 0.5}});
  r.default_rule = ProbabilityVector{0.5, 0.5};
  const ContextTreeModel model(alphabet, alphabet.parse("2"), LengthFunction::identity(), r);
  CHECK(has(validate(model), ViolationKind::StructuralLaw));
  try {
    model.context_of(alphabet.parse("1112"));
    FAIL("expected ModelInconsistent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ModelInconsistent);
  }
}

TEST_CASE("validation") {
  for (const char* name : vlmc::testing::kExampleModels) {
    CAPTURE(name);
    CHECK(validate(example_model(name)).empty());
  }

  const Alphabet a({'1', '2'}, 2);
  SUBCASE("suffix violation") {
    // keys "2" and "2 then 1 then ..." cannot coexist when one is a suffix
    auto m = two_symbol(LengthFunction::zero(), {{a.parse_display("2"), {0.5, 0.5}}, {a.parse_display("21"), {0.5, 0.5}}});
    const auto vs = validate(m);
    CHECK(has(vs, ViolationKind::SuffixViolation));
  }
  SUBCASE("epsilon regularity") {
    auto m = two_symbol(LengthFunction::identity(), {{a.parse_display("2"), {0.9, 0.1}}});
    CHECK(has(validate(m), ViolationKind::EpsilonRegularity));
  }
  SUBCASE("probability sum") {
    auto m = two_symbol(LengthFunction::identity(), {{a.parse_display("2"), {0.5, 0.4}}});
    CHECK(has(validate(m), ViolationKind::ProbabilitySum));
  }
  SUBCASE("vector size and negative entries") {
    auto m = two_symbol(LengthFunction::identity(), {{a.parse_display("2"), {1.2, -0.2}}});
    CHECK(has(validate(m), ViolationKind::NegativeProbability));
    auto n = two_symbol(LengthFunction::identity(), {{a.parse_display("2"), {1.0}}});
    CHECK(has(validate(n), ViolationKind::VectorSize));
  }
  SUBCASE("reference must be regular") {
    TransitionRules r;
    r.epsilon = 0.2;
    r.default_rule = ProbabilityVector{0.5, 0.5};
    const Alphabet b({'1', '2'}, 1);
    const ContextTreeModel m(b, b.parse("2"), LengthFunction::zero(), r);
    CHECK(has(validate(m), ViolationKind::ReferenceNotRegular));
  }
  SUBCASE("epsilon range") {
    auto m = two_symbol(LengthFunction::zero(), {}, 0.0);
    CHECK(has(validate(m), ViolationKind::EpsilonRange));
    auto n = two_symbol(LengthFunction::zero(), {}, 0.6);
    CHECK(has(validate(n), ViolationKind::EpsilonRange));
  }
}

TEST_CASE("stored rules are distributions with epsilon floors") {
  for (const char* name : vlmc::testing::kExampleModels) {
    CAPTURE(name);
    const auto model = example_model(name);
    for (std::size_t id = 0; id < model.rule_count(); ++id) {
      const auto& p = model.rule(id);
      double total = 0.0;
      for (std::size_t s = 0; s < p.size(); ++s) {
        total += p[s];
        if (model.alphabet().is_regular(Symbol{static_cast<std::uint8_t>(s)})) {
          CHECK(p[s] >= model.epsilon());
        }
      }
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
    for (const auto& rule : model.rules().by_context) {
      const auto d = model.m_w(rule.context);
      CHECK(rule.context.size() == model.context_length(d));
    }
  }
}

TEST_CASE("C_eps values") {
  CHECK(c_epsilon(0.2, 1) == doctest::Approx(0.2231435513).epsilon(1e-10));
  CHECK(c_epsilon(0.2, 3) == doctest::Approx(-std::log(1.0 - 0.008) / 3.0).epsilon(1e-12));
  CHECK(c_epsilon(0.2, 3) == doctest::Approx(0.00267736).epsilon(1e-5));
  CHECK(std::isinf(c_epsilon(1.0, 1)));
}

TEST_CASE("C_eps is monotone in epsilon and in |w|") {
  for (int e = 1; e < 20; ++e) {
    const double eps = e / 20.0;
    for (std::size_t len = 1; len < 6; ++len) {
      CHECK(c_epsilon(eps, len + 1) < c_epsilon(eps, len));
      CHECK(c_epsilon(eps + 0.05 - 1e-9, len) > c_epsilon(eps, len));
    }
  }
}

TEST_CASE("growth condition") {
  CHECK(check_rate_condition(example_model("worked"), 32).verdict == Verdict::Pass);
  CHECK(check_rate_condition(example_model("renewal"), 32).verdict == Verdict::Pass);

  const double c = c_epsilon(0.2, 1);
  auto exponential = [&](double rate) { return two_symbol(LengthFunction::exponential(rate), {}); };
  CHECK(check_rate_condition(exponential(2.0 * c), 32).verdict == Verdict::Fail);
  CHECK(check_rate_condition(exponential(0.5 * c), 32).verdict == Verdict::Pass);

  const auto open_table = two_symbol(LengthFunction::table({0, 1, 2}, LengthFunction::Tail::Unspecified), {});
  const auto report = check_rate_condition(open_table, 16);
  CHECK(report.verdict == Verdict::Inconclusive);
  CHECK(report.ratios.size() == 16);
}
