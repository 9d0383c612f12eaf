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
#include <set>
#include <sstream>

#include "vlmc/oracle.hpp"
#include "vlmc/symbols.hpp"
#include "vlmc/uniform_source.hpp"

using namespace vlmc;

TEST_CASE("counter source is a pure function of seed and index") {
  const auto a = UniformSource::counter(42);
  const auto b = UniformSource::counter(42);
  const auto c = UniformSource::counter(43);
  int differ = 0;
  for (std::int64_t i = -5000; i < 5000; ++i) {
    REQUIRE(a(i) == b(i));
    REQUIRE(a(i) >= 0.0);
    REQUIRE(a(i) < 1.0);
    differ += a(i) != c(i);
  }
  CHECK(differ >= 9900);
  // reading order does not matter
  const double late = a(1'000'000);
  CHECK(a(-5) == b(-5));
  CHECK(a(1'000'000) == late);
  CHECK(a.seed() == 42);
  CHECK(a.covers(-(std::int64_t{1} << 60)));
}

TEST_CASE("counter source looks uniform and independent") {
  const auto u = UniformSource::counter(2026);
  const int n = 1'000'000;
  std::vector<std::uint64_t> bins(100, 0);
  double lag = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double x = u(i);
    bins[static_cast<std::size_t>(x * 100)] += 1;
    lag += (x - 0.5) * (u(i + 1) - 0.5);
  }
  const auto report = chi_square_test(bins, std::vector<double>(100, 0.01), 0.99);
  CHECK(report.passed);
  CHECK(report.dof == 99);
  CHECK(std::abs(lag / n) < 5 * (1.0 / 12) / std::sqrt(double(n)));
}

TEST_CASE("derived seeds are distinct") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    seen.insert(derive_seed(1, s));
  }
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(1, 5) == derive_seed(1, 5));
  CHECK(derive_seed(1, 5) != derive_seed(2, 5));
}

TEST_CASE("fixed trace") {
  const auto t = UniformSource::fixed_trace({{-2, 0.25}, {0, 0.5}});
  CHECK(t.is_trace());
  CHECK(t(-2) == 0.25);
  CHECK(t(0) == 0.5);
  CHECK(t.covers(0));
  CHECK_FALSE(t.covers(-1));
  try {
    t(-1);
    FAIL("expected IndexNotCovered");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndexNotCovered);
  }
  CHECK_THROWS_AS(UniformSource::fixed_trace({{0, 1.0}}), Error);
  CHECK_THROWS_AS(UniformSource::fixed_trace({{0, -0.1}}), Error);
}

TEST_CASE("trace csv") {
  std::istringstream in("index,value\n# note\n-3,0.1\n-2,0.75\n4,0.5\n");
  const auto t = load_trace_csv(in);
  CHECK(t(-3) == 0.1);
  CHECK(t(-2) == 0.75);
  CHECK(t(4) == 0.5);
  CHECK_FALSE(t.covers(0));

  std::istringstream bad("0,abc\n");
  CHECK_THROWS(load_trace_csv(bad));
}
