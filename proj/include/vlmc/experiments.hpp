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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vlmc/model.hpp"
#include "vlmc/perfect_sampler.hpp"

namespace vlmc {

enum class ExperimentKind { Sample, ThetaDistribution, EpsilonSweep, Regeneration, AuxiliaryTrace, OracleCompare };

std::string_view to_string(ExperimentKind kind);

enum class Sampler { ByDefinition, BackwardForward };

struct ExperimentPlan {
  ExperimentKind kind = ExperimentKind::Sample;
  std::string model_path;  // recorded in the manifest only
  std::uint64_t seed = 1;
  std::int64_t m = 0;
  std::int64_t n = 0;
  std::uint64_t iterations = 1;
  std::uint64_t horizon = 50;
  std::uint64_t max_back = kDefaultMaxBack;
  Sampler sampler = Sampler::BackwardForward;
  std::filesystem::path out = ".";
  std::vector<double> eps_grid;        // sweep values; empty means 0.2, 0.3, ..., 1.0
  std::optional<std::string> trace;    // fixed uniforms (index,value CSV) instead of seeds
  std::optional<std::string> sample;   // saved sample for regeneration reports
  std::uint64_t grid = 10;             // cells per uniform for the enumeration oracle
};

struct RunSummary {
  std::uint64_t runs = 0;
  std::uint64_t aborted = 0;
  std::vector<std::filesystem::path> files;
  /// Pass or fail of the built-in check of the experiment, when it has one.
  std::optional<bool> check;
  std::string message;

  bool aborted_dominated() const { return runs > 0 && 2 * aborted > runs; }
};

/// Runs one experiment, writing CSV (and SVG for sweeps) plus manifest.json
/// into plan.out. Aborted runs are counted, not fatal.
RunSummary run_plan(const ExperimentPlan& plan, const ContextTreeModel& model);

/// The sweep model at `epsilon`: only the first symbol is regular and every
/// context predicts it with probability epsilon, the rest spread evenly.
ContextTreeModel sweep_instance(const ContextTreeModel& base, double epsilon);

struct SweepRow {
  double epsilon = 0.0;
  std::uint64_t runs = 0;
  std::uint64_t aborted = 0;
  std::uint64_t sum_abs_theta = 0;
  std::uint64_t sum_steps = 0;
  double mean_abs_theta = 0.0;
  double stderr_abs_theta = 0.0;
  double mean_steps = 0.0;
};

/// theta[0, 0] by the backward-forward sampler for `iterations` seeds per epsilon.
std::vector<SweepRow> epsilon_sweep(const ContextTreeModel& base, const std::vector<double>& grid,
                                    std::uint64_t iterations, std::uint64_t seed_base, std::uint64_t max_back);

/// Line chart of y against x with +-err bars.
std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& err);

struct WindowComparison {
  std::vector<Word> words;
  std::vector<double> reference;
  std::vector<double> empirical;
  double total_variation = 0.0;
  double standard_error = 0.0;  // half the sum of per-word binomial standard errors
  double unresolved = 0.0;
  bool balanced = false;
  std::uint64_t paths = 0;  // enumeration leaves
  std::uint64_t runs = 0;
  std::uint64_t aborted = 0;

  bool agrees() const { return balanced && total_variation <= 4.0 * standard_error + unresolved; }
};

/// Compares the law of X_1..X_length from perfect simulation with the exact
/// enumeration over a `grid`-cell discretization cut at `depth`.
WindowComparison compare_window_law(const ContextTreeModel& model, std::size_t length, std::uint64_t grid,
                                    std::uint64_t depth, std::uint64_t runs, std::uint64_t seed_base,
                                    std::uint64_t max_back = kDefaultMaxBack);

}  // namespace vlmc
