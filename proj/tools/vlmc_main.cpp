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

#include <CLI11.hpp>
#include <iostream>

#include "vlmc/experiments.hpp"
#include "vlmc/model_text.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitModel = 2;
constexpr int kExitAborted = 3;

struct Options {
  std::string model;
  std::uint64_t seed = 1;
  std::vector<std::int64_t> window{0, 0};
  std::uint64_t iterations = 1;
  std::uint64_t horizon = 50;
  std::uint64_t max_back = vlmc::kDefaultMaxBack;
  std::string out = "out";
  std::string algorithm = "2";
  std::string trace;
  std::string sample;
  std::uint64_t grid = 10;
  std::vector<double> eps;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model, "Model file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Base seed");
  cmd->add_option("--window", o.window, "Target window m n")->expected(2);
  cmd->add_option("--iterations", o.iterations, "Number of independent runs")->check(CLI::PositiveNumber);
  cmd->add_option("--horizon", o.horizon, "Horizon (regeneration look-ahead, enumeration depth)");
  cmd->add_option("--max-back", o.max_back, "Give up a run after this many backward steps");
  cmd->add_option("--out", o.out, "Output directory");
}

int run(vlmc::ExperimentKind kind, const Options& o) {
  const auto model = vlmc::load_model_file(o.model);
  vlmc::ExperimentPlan plan;
  plan.kind = kind;
  plan.model_path = o.model;
  plan.seed = o.seed;
  plan.m = o.window.at(0);
  plan.n = o.window.at(1);
  plan.iterations = o.iterations;
  plan.horizon = o.horizon;
  plan.max_back = o.max_back;
  plan.out = o.out;
  plan.sampler = (o.algorithm == "1" || o.algorithm == "definition") ? vlmc::Sampler::ByDefinition
                                                                      : vlmc::Sampler::BackwardForward;
  plan.grid = o.grid;
  plan.eps_grid = o.eps;
  if (!o.trace.empty()) {
    plan.trace = o.trace;
  }
  if (!o.sample.empty()) {
    plan.sample = o.sample;
  }
  const auto summary = vlmc::run_plan(plan, model);
  std::cout << to_string(kind) << ": " << summary.runs << " runs, " << summary.aborted << " aborted\n";
  if (!summary.message.empty()) {
    std::cout << summary.message << '\n';
  }
  for (const auto& file : summary.files) {
    std::cout << "wrote " << file.string() << '\n';
  }
  return summary.aborted_dominated() ? kExitAborted : 0;
}

int validate_command(const Options& o, std::uint64_t horizon) {
  const auto model = vlmc::load_model_file(o.model);
  const auto report = vlmc::check_rate_condition(model, horizon);
  std::cout << "model ok (hash " << vlmc::model_hash(model) << ")\n"
            << "C_eps = " << report.c_epsilon << "\n"
            << "growth condition: " << to_string(report.verdict);
  if (!report.reason.empty()) {
    std::cout << " (" << report.reason << ")";
  }
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perfect simulation of chains with unbounded variable-length memory"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "Check a model file and its growth condition");
  validate->add_option("--model", o.model, "Model file")->required()->check(CLI::ExistingFile);
  std::uint64_t rate_horizon = 64;
  validate->add_option("--horizon", rate_horizon, "Horizon for tabulated growth ratios");

  auto* sample = app.add_subcommand("sample", "Perfectly simulate a window");
  add_common(sample, o);
  sample->add_option("--algorithm", o.algorithm, "1 (definition) or 2 (backward-forward)")
      ->check(CLI::IsMember({"1", "2", "definition", "backward-forward"}));
  sample->add_option("--trace", o.trace, "CSV of index,value uniforms to use instead of a seed");

  auto* theta = app.add_subcommand("theta-dist", "Histogram of the backward depth m - theta[m, n]");
  add_common(theta, o);
  theta->add_option("--trace", o.trace, "CSV of index,value uniforms");

  auto* sweep = app.add_subcommand("eps-sweep", "Mean backward depth across epsilon values");
  add_common(sweep, o);
  sweep->add_option("--eps", o.eps, "Epsilon grid (default 0.2 0.3 ... 1.0)");

  auto* regen = app.add_subcommand("regen", "Hidden and visible regeneration times");
  add_common(regen, o);
  regen->add_option("--sample", o.sample, "Sample CSV written by 'sample' (visible times only)");

  auto* aux = app.add_subcommand("aux-trace", "Spontaneous trace and bounding processes");
  add_common(aux, o);
  aux->add_option("--trace", o.trace, "CSV of index,value uniforms");

  auto* oracle = app.add_subcommand("oracle-compare", "Compare simulated window law with exact enumeration");
  add_common(oracle, o);
  oracle->add_option("--grid", o.grid, "Cells per uniform");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      return validate_command(o, rate_horizon);
    }
    if (*sample) {
      return run(vlmc::ExperimentKind::Sample, o);
    }
    if (*theta) {
      return run(vlmc::ExperimentKind::ThetaDistribution, o);
    }
    if (*sweep) {
      return run(vlmc::ExperimentKind::EpsilonSweep, o);
    }
    if (*regen) {
      return run(vlmc::ExperimentKind::Regeneration, o);
    }
    if (*aux) {
      return run(vlmc::ExperimentKind::AuxiliaryTrace, o);
    }
    if (*oracle) {
      return run(vlmc::ExperimentKind::OracleCompare, o);
    }
  } catch (const vlmc::ParseError& e) {
    std::cerr << o.model << ":" << e.line() << ":" << e.column() << ": error: " << e.message() << '\n';
    return kExitModel;
  } catch (const vlmc::SemanticError& e) {
    std::cerr << o.model << ": " << e.what() << '\n';
    return kExitModel;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
