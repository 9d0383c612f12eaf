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
#include "vlmc/perfect_sampler.hpp"

using namespace vlmc;
using vlmc::testing::example_model;
using vlmc::testing::trace_from;

namespace {

// Literal regeneration time: the largest k <= m with [k, n] constructible,
// trying every k.
std::optional<std::int64_t> literal_regeneration(const UniformSource& u, std::int64_t m, std::int64_t n,
                                                 const UpdateFunction& f, std::int64_t lowest) {
  for (std::int64_t k = m; k >= lowest; --k) {
    if (constructible(u, k, n, f)) {
      return k;
    }
  }
  return std::nullopt;
}

// Replays the update function over the sample and checks every symbol.
void check_replay(const SimulationResult& r, const UpdateFunction& f, const UniformSource& u) {
  REQUIRE(r.sample.size() == static_cast<std::size_t>(r.n - r.theta + 1));
  REQUIRE(r.provenance.size() == r.sample.size());
  for (std::int64_t i = r.theta; i <= r.n; ++i) {
    const WordView past = WordView(r.sample).first(static_cast<std::size_t>(i - r.theta));
    const auto out = f.apply(u(i), past);
    REQUIRE(out.symbol);
    CHECK(*out.symbol == r.at(i));
    const auto& p = r.provenance[static_cast<std::size_t>(i - r.theta)];
    CHECK(p.spontaneous == (out.context_length == 0));
    CHECK(p.context_length == out.context_length);
    if (u(i) < f.spontaneous_mass()) {
      CHECK(p.spontaneous);
      CHECK(f.spontaneous(u(i)) == r.at(i));
    }
  }
}

}  // namespace

TEST_CASE("hand-built trace on the worked model") {
  const UpdateFunction f(example_model("worked"));
  const auto u = trace_from(-5, {0.35, 0.25, 0.15, 0.7, 0.3, 0.45, 0.9, 0.1});
  const Alphabet& a = f.model().alphabet();

  CHECK_FALSE(constructible(u, 0, 2, f));
  CHECK(constructible(u, 0, 2, f).failed_at == 0);
  CHECK(constructible(u, -1, 2, f).failed_at == 1);
  CHECK(constructible(u, -4, 2, f).failed_at == -2);
  const auto witness = constructible(u, -5, 2, f);
  REQUIRE(witness);
  CHECK(a.format(witness.word) == "22122121");

  CHECK(regeneration_time(u, 0, 2, f, 5) == -5);
  CHECK_FALSE(regeneration_time(u, 0, 2, f, 4));

  for (const auto& result : {simulate_by_definition(u, 0, 2, f, 5), simulate_backward_forward(u, 0, 2, f, 5)}) {
    REQUIRE(result);
    CHECK(result->theta == -5);
    CHECK(result->steps == 13);
    CHECK(a.format(result->sample) == "22122121");
    CHECK(a.format(result->window()) == "121");
    check_replay(*result, f, u);
  }
}

TEST_CASE("an all-spontaneous window needs no backward step") {
  const UpdateFunction f(example_model("worked"));
  const auto u = trace_from(0, {0.1, 0.3, 0.05});
  const auto r = simulate_backward_forward(u, 0, 2, f, 0);
  REQUIRE(r);
  CHECK(r->theta == 0);
  CHECK(r->steps == 3);
  CHECK(f.model().alphabet().format(r->sample) == "121");
}

TEST_CASE("search gives up past max_back") {
  const UpdateFunction f(example_model("worked"));
  std::vector<double> high(40, 0.95);
  const auto u = trace_from(-30, high);
  CHECK_FALSE(simulate_backward_forward(u, 0, 5, f, 20));
  CHECK_FALSE(simulate_by_definition(u, 0, 5, f, 20));
  CHECK_FALSE(regeneration_time(u, 0, 5, f, 20));
}

TEST_CASE("regeneration search agrees with the literal definition") {
  for (const char* name : vlmc::testing::kExampleModels) {
    CAPTURE(name);
    const UpdateFunction f(example_model(name));
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      const auto u = UniformSource::counter(derive_seed(11, seed));
      const auto fast = regeneration_time(u, 0, 4, f, 3000);
      const auto slow = literal_regeneration(u, 0, 4, f, -3000);
      CHECK(fast == slow);
    }
  }
}

TEST_CASE("both samplers agree and satisfy the step identity") {
  for (const char* name : vlmc::testing::kExampleModels) {
    CAPTURE(name);
    const UpdateFunction f(example_model(name));
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto u = UniformSource::counter(derive_seed(5, seed));
      const auto one = simulate_by_definition(u, -3, 6, f, 100000);
      const auto two = simulate_backward_forward(u, -3, 6, f, 100000);
      REQUIRE(one.has_value() == two.has_value());
      if (!one) {
        continue;
      }
      CHECK(one->theta == two->theta);
      CHECK(one->sample == two->sample);
      CHECK(one->provenance == two->provenance);
      CHECK(one->steps == two->steps);
      CHECK(two->steps == static_cast<std::uint64_t>((6 - -3 + 1) + 2 * (-3 - two->theta)));
      CHECK(two->theta <= -3);
      check_replay(*two, f, u);
      // maximality: no later start works
      for (std::int64_t k = two->theta + 1; k <= -3; ++k) {
        CHECK_FALSE(constructible(u, k, 6, f));
      }
    }
  }
}

TEST_CASE("the stationary path does not depend on the window") {
  const UpdateFunction f(example_model("worked"));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto u = UniformSource::counter(derive_seed(9, seed));
    const auto narrow = sample_stationary(u, 0, 3, f, 100000);
    const auto wide = sample_stationary(u, -10, 8, f, 100000);
    REQUIRE(narrow);
    REQUIRE(wide);
    CHECK(wide->theta <= narrow->theta);
    for (std::int64_t i = 0; i <= 3; ++i) {
      CHECK(narrow->at(i) == wide->at(i));
    }
  }
}

TEST_CASE("full spontaneous mass regenerates immediately") {
  TransitionRules rules;
  rules.epsilon = 0.5;
  rules.default_rule = ProbabilityVector{0.5, 0.5};
  const Alphabet a({'1', '2'}, 2);
  const UpdateFunction f(ContextTreeModel(a, a.parse("2"), LengthFunction::identity(), rules));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto r = simulate_backward_forward(UniformSource::counter(seed), 0, 9, f);
    REQUIRE(r);
    CHECK(r->theta == 0);
    CHECK(r->steps == 10);
  }
}
