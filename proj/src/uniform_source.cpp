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

#include "vlmc/uniform_source.hpp"

#include <cctype>
#include <charconv>
#include <string>

#include "vlmc/symbols.hpp"

namespace vlmc {

namespace {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

UniformSource UniformSource::counter(std::uint64_t seed) {
  return UniformSource(Counter{seed, mix64(seed + kGolden)});
}

UniformSource UniformSource::fixed_trace(std::map<std::int64_t, double> values) {
  for (const auto& [index, u] : values) {
    if (!(u >= 0.0 && u < 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "trace value at index " + std::to_string(index) + " is outside [0, 1)");
    }
  }
  return UniformSource(std::move(values));
}

double UniformSource::operator()(std::int64_t i) const {
  if (const auto* c = std::get_if<Counter>(&state_)) {
    const std::uint64_t z = mix64(c->key ^ mix64(static_cast<std::uint64_t>(i) * kGolden + 0x632be59bd9b4e019ULL));
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }
  const auto& trace = std::get<Trace>(state_);
  auto it = trace.find(i);
  if (it == trace.end()) {
    throw Error(ErrorCode::IndexNotCovered, "trace has no value at index " + std::to_string(i));
  }
  return it->second;
}

bool UniformSource::covers(std::int64_t i) const {
  if (std::holds_alternative<Counter>(state_)) {
    return true;
  }
  return std::get<Trace>(state_).count(i) != 0;
}

std::uint64_t UniformSource::seed() const {
  if (const auto* c = std::get_if<Counter>(&state_)) {
    return c->seed;
  }
  return 0;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix64(mix64(base) ^ (stream * kGolden + 0x2545f4914f6cdd1dULL));
}

UniformSource load_trace_csv(std::istream& in) {
  std::map<std::int64_t, double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    const auto comma = line.find(',', first);
    if (comma == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "trace line " + std::to_string(line_no) + ": expected index,value");
    }
    std::string lhs = line.substr(first, comma - first);
    std::string rhs = line.substr(comma + 1);
    auto trim = [](std::string& s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
      std::size_t b = 0;
      while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
      s.erase(0, b);
    };
    trim(lhs);
    trim(rhs);
    std::int64_t index = 0;
    auto [p1, e1] = std::from_chars(lhs.data(), lhs.data() + lhs.size(), index);
    if (e1 != std::errc() || p1 != lhs.data() + lhs.size()) {
      if (values.empty() && line_no == 1) {
        continue;  // header
      }
      throw Error(ErrorCode::InvalidArgument, "trace line " + std::to_string(line_no) + ": bad index");
    }
    double u = 0.0;
    auto [p2, e2] = std::from_chars(rhs.data(), rhs.data() + rhs.size(), u);
    if (e2 != std::errc() || p2 != rhs.data() + rhs.size()) {
      throw Error(ErrorCode::InvalidArgument, "trace line " + std::to_string(line_no) + ": bad value");
    }
    values[index] = u;
  }
  return UniformSource::fixed_trace(std::move(values));
}

}  // namespace vlmc
