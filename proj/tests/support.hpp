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

#include <map>
#include <string>
#include <vector>

#include "vlmc/model_text.hpp"
#include "vlmc/uniform_source.hpp"

namespace vlmc::testing {

inline ContextTreeModel example_model(const std::string& name) {
  return load_model_file(std::string(VLMC_MODELS_DIR) + "/" + name + ".vlmc");
}

inline const char* kExampleModels[] = {"worked", "renewal", "alternating", "identity", "sweep", "table"};

/// Fixed trace from consecutive values starting at index `first`.
inline UniformSource trace_from(std::int64_t first, const std::vector<double>& values) {
  std::map<std::int64_t, double> map;
  for (const double v : values) {
    map[first++] = v;
  }
  return UniformSource::fixed_trace(std::move(map));
}

}  // namespace vlmc::testing
