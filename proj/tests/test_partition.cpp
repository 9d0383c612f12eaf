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

#include <algorithm>
#include <random>

#include "support.hpp"
#include "vlmc/partition.hpp"

using namespace vlmc;
using vlmc::testing::example_model;

namespace {

// Sorted, disjoint, and covering [0, 1) up to rounding.
void check_tiles_unit_interval(const PartitionRow& row) {
  auto pieces = row.intervals();
  std::erase_if(pieces, [](const Interval& i) { return i.length() <= 0.0; });
  std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  REQUIRE_FALSE(pieces.empty());
  CHECK(pieces.front().lo == doctest::Approx(0.0));
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    CHECK(pieces[i].lo == doctest::Approx(pieces[i - 1].hi).epsilon(1e-12));
  }
  CHECK(pieces.back().hi == doctest::Approx(1.0).epsilon(1e-12));
}

}  // namespace

TEST_CASE("worked partition for the context \"2\"") {
  const auto model = example_model("worked");
  const Alphabet& a = model.alphabet();
  const Symbol one = *a.find('1');
  const Symbol two = *a.find('2');
  const PartitionRow row = build_partition(model, a.parse("2"));

  CHECK(row.spontaneous_mass() == doctest::Approx(0.4));
  CHECK(row.spontaneous_interval(one).lo == doctest::Approx(0.0));
  CHECK(row.spontaneous_interval(one).hi == doctest::Approx(0.2));
  CHECK(row.spontaneous_interval(two).lo == doctest::Approx(0.2));
  CHECK(row.spontaneous_interval(two).hi == doctest::Approx(0.4));
  CHECK(row.context_interval(one).lo == doctest::Approx(0.4));
  CHECK(row.context_interval(one).hi == doctest::Approx(0.5));
  CHECK(row.context_interval(two).lo == doctest::Approx(0.5));
  CHECK(row.context_interval(two).hi == doctest::Approx(1.0));

  CHECK(row.locate(0.0) == one);
  CHECK(row.locate(0.2) == two);
  CHECK(row.locate(0.45) == one);
  CHECK(row.locate(0.5) == two);
  CHECK(row.locate(0.999) == two);
}

TEST_CASE("spontaneous row leaves the star region") {
  const auto model = example_model("table");
  const PartitionRow row = build_partition(model, Word{});
  CHECK_FALSE(row.has_context_block());
  CHECK(row.spontaneous_mass() == doctest::Approx(0.3));
  CHECK(row.locate(0.05) == model.alphabet().find('a'));
  CHECK(row.locate(0.25) == model.alphabet().find('c'));
  CHECK_FALSE(row.locate(0.31));
  CHECK_FALSE(row.locate(0.9));
  // the non-regular symbol has no spontaneous block
  CHECK(row.spontaneous_interval(*model.alphabet().find('d')).length() == 0.0);
}

TEST_CASE("negative context width is rejected") {
  const Alphabet a({'1', '2'}, 2);
  CHECK_THROWS_AS(PartitionRow::context(a, 0.2, {0.1, 0.9}), Error);
}

TEST_CASE("every rule row has exact block lengths and tiles [0, 1)") {
  for (const char* name : vlmc::testing::kExampleModels) {
    CAPTURE(name);
    const UpdateFunction f(example_model(name));
    const auto& model = f.model();
    for (std::size_t id = 0; id < model.rule_count(); ++id) {
      const PartitionRow& row = f.row(id);
      const auto& p = model.rule(id);
      for (std::size_t s = 0; s < p.size(); ++s) {
        const Symbol a{static_cast<std::uint8_t>(s)};
        CHECK(row.k_length(a) == doctest::Approx(p[s]).epsilon(1e-12));
        CHECK(row.spontaneous_interval(a).length() ==
              doctest::Approx(model.alphabet().is_regular(a) ? model.epsilon() : 0.0));
      }
      check_tiles_unit_interval(row);
    }
  }
}

TEST_CASE("located frequencies follow the transition law") {
  for (const char* name : vlmc::testing::kExampleModels) {
    CAPTURE(name);
    const UpdateFunction f(example_model(name));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (std::size_t id = 0; id < f.model().rule_count(); ++id) {
      const auto& p = f.model().rule(id);
      std::vector<int> counts(p.size(), 0);
      const int draws = 1'000'000;
      for (int i = 0; i < draws; ++i) {
        counts[f.row(id).locate(uniform(rng))->index] += 1;
      }
      for (std::size_t s = 0; s < p.size(); ++s) {
        const double se = std::sqrt(p[s] * (1 - p[s]) / draws);
        CHECK(std::abs(counts[s] / double(draws) - p[s]) <= 4 * se + 1e-12);
      }
    }
  }
}

TEST_CASE("spontaneous uniforms give the same symbol after every past") {
  const UpdateFunction f(example_model("worked"));
  const Alphabet& a = f.model().alphabet();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uniform(0.0, f.spontaneous_mass());
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 2000; ++trial) {
    const double u = uniform(rng);
    const auto expected = f.spontaneous(u);
    REQUIRE(expected);
    Word past;
    const std::size_t length = static_cast<std::size_t>(trial % 12);
    for (std::size_t i = 0; i < length; ++i) {
      past.push_back(*a.find(coin(rng) ? '1' : '2'));
    }
    CHECK(f(u, past) == expected);
  }
}

TEST_CASE("update function") {
  const UpdateFunction f(example_model("worked"));
  const Alphabet& a = f.model().alphabet();
  const Symbol one = *a.find('1');
  const Symbol two = *a.find('2');

  SUBCASE("spontaneous draws ignore the past") {
    for (const char* past : {"", "1", "11", "2", "1211"}) {
      CHECK(f.apply(0.1, a.parse(past)).symbol == one);
      CHECK(f.apply(0.1, a.parse(past)).context_length == 0);
      CHECK(f.apply(0.3, a.parse(past)).symbol == two);
    }
  }
  SUBCASE("short past gives the star outcome") {
    CHECK_FALSE(f.apply(0.7, a.parse("")).symbol);
    CHECK_FALSE(f.apply(0.7, a.parse("111")).symbol);
    CHECK_FALSE(f.apply(0.7, a.parse("21")).symbol);
  }
  SUBCASE("context draws") {
    const auto after_two = f.apply(0.45, a.parse("12"));
    CHECK(after_two.symbol == one);
    CHECK(after_two.context_length == 1);
    const auto long_ctx = f.apply(0.9, a.parse("22211"));
    CHECK(long_ctx.symbol == two);
    CHECK(long_ctx.context_length == 5);
  }
}
