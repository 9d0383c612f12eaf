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

#include "vlmc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "vlmc/analysis.hpp"
#include "vlmc/model_text.hpp"
#include "vlmc/oracle.hpp"
#include "vlmc/partition.hpp"
#include "vlmc/uniform_source.hpp"

namespace vlmc {

namespace {

constexpr const char* kVersion = "1.0.0";

std::ofstream open_output(const std::filesystem::path& path, RunSummary& summary) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  }
  summary.files.push_back(path);
  return out;
}

std::optional<SimulationResult> simulate(const ExperimentPlan& plan, const UniformSource& u, const UpdateFunction& f) {
  return plan.sampler == Sampler::ByDefinition ? simulate_by_definition(u, plan.m, plan.n, f, plan.max_back)
                                               : simulate_backward_forward(u, plan.m, plan.n, f, plan.max_back);
}

UniformSource load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::InvalidArgument, "cannot open trace " + path);
  }
  return load_trace_csv(in);
}

// Source for run r: the fixed trace when one is given, else a derived seed.
UniformSource source_for(const ExperimentPlan& plan, std::uint64_t run) {
  if (plan.trace) {
    return load_trace(*plan.trace);
  }
  return UniformSource::counter(derive_seed(plan.seed, run));
}

std::uint64_t run_count(const ExperimentPlan& plan) { return plan.trace ? 1 : plan.iterations; }

void run_sample(const ExperimentPlan& plan, const ContextTreeModel& model, RunSummary& summary, nlohmann::json& results) {
  const UpdateFunction f(model);
  auto csv = open_output(plan.out / "sample.csv", summary);
  csv << "run,seed,m,n,theta,steps,spontaneous,sample\n";
  std::uint64_t spontaneous_total = 0;
  for (std::uint64_t r = 0; r < run_count(plan); ++r) {
    const UniformSource u = source_for(plan, r);
    const auto result = simulate(plan, u, f);
    ++summary.runs;
    const std::string seed = plan.trace ? "" : std::to_string(u.seed());
    if (!result) {
      ++summary.aborted;
      csv << r << ',' << seed << ',' << plan.m << ',' << plan.n << ",,,,\n";
      continue;
    }
    std::uint64_t spontaneous = 0;
    for (const auto& p : result->provenance) {
      spontaneous += p.spontaneous ? 1 : 0;
    }
    spontaneous_total += spontaneous;
    csv << r << ',' << seed << ',' << plan.m << ',' << plan.n << ',' << result->theta << ',' << result->steps << ','
        << spontaneous << ',' << model.alphabet().format(result->window()) << '\n';
  }
  results["spontaneous_symbols"] = spontaneous_total;
}

void run_theta_distribution(const ExperimentPlan& plan, const ContextTreeModel& model, RunSummary& summary,
                            nlohmann::json& results) {
  const UpdateFunction f(model);
  std::vector<std::uint64_t> depths;
  std::map<std::uint64_t, std::uint64_t> histogram;
  for (std::uint64_t r = 0; r < run_count(plan); ++r) {
    const UniformSource u = source_for(plan, r);
    ++summary.runs;
    const auto theta = regeneration_time(u, plan.m, plan.n, f, plan.max_back);
    if (!theta) {
      ++summary.aborted;
      continue;
    }
    const auto depth = static_cast<std::uint64_t>(plan.m - *theta);
    depths.push_back(depth);
    ++histogram[depth];
  }
  auto csv = open_output(plan.out / "theta-dist.csv", summary);
  csv << "depth,count,frequency\n";
  for (const auto& [depth, count] : histogram) {
    csv << depth << ',' << count << ',' << static_cast<double>(count) / static_cast<double>(depths.size()) << '\n';
  }
  if (depths.empty()) {
    return;
  }
  // m - theta[m, n] is geometric when the spontaneous symbols alone renew the chain
  const auto test = geometric_test(depths, f.spontaneous_mass());
  results["geometric_reference"] = f.spontaneous_mass();
  results["chi_square"] = test.statistic;
  results["dof"] = test.dof;
  results["p_value"] = test.p_value;
  results["geometric_pass"] = test.passed;
  summary.check = test.passed;
  summary.message = "chi-square vs geometric(" + std::to_string(f.spontaneous_mass()) +
                    "): p-value " + std::to_string(test.p_value) + (test.passed ? " (pass)" : " (fail)");
}

void run_sweep(const ExperimentPlan& plan, const ContextTreeModel& model, RunSummary& summary, nlohmann::json& results) {
  std::vector<double> grid = plan.eps_grid;
  if (grid.empty()) {
    for (int j = 2; j <= 10; ++j) {
      grid.push_back(j / 10.0);
    }
  }
  const auto rows = epsilon_sweep(model, grid, plan.iterations, plan.seed, plan.max_back);
  auto csv = open_output(plan.out / "eps-sweep.csv", summary);
  csv << "epsilon,runs,aborted,mean_abs_theta,stderr_abs_theta,mean_steps,sum_abs_theta,sum_steps\n";
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;
  bool identity = true;
  for (const auto& row : rows) {
    summary.runs += row.runs;
    summary.aborted += row.aborted;
    const std::uint64_t done = row.runs - row.aborted;
    identity = identity && row.sum_steps == done + 2 * row.sum_abs_theta;
    csv << row.epsilon << ',' << row.runs << ',' << row.aborted << ',' << row.mean_abs_theta << ','
        << row.stderr_abs_theta << ',' << row.mean_steps << ',' << row.sum_abs_theta << ',' << row.sum_steps << '\n';
    x.push_back(row.epsilon);
    y.push_back(row.mean_abs_theta);
    err.push_back(row.stderr_abs_theta);
  }
  auto svg = open_output(plan.out / "eps-sweep.svg", summary);
  svg << line_chart_svg("Mean backward depth against epsilon", "epsilon", "mean |theta[0]|", x, y, err);
  results["steps_identity"] = identity;
  summary.check = identity;
  summary.message = identity ? "steps identity holds on every row" : "steps identity violated";
}

// First data row of a sample CSV: (m, window string).
std::pair<std::int64_t, std::string> load_sample(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::InvalidArgument, "cannot open sample " + path);
  }
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) {
      cells.push_back(cell);
    }
    if (cells.size() == 8 && !cells[7].empty()) {
      return {std::stoll(cells[2]), cells[7]};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "sample file has no completed run");
}

void run_regeneration(const ExperimentPlan& plan, const ContextTreeModel& model, RunSummary& summary,
                      nlohmann::json& results) {
  const UpdateFunction f(model);
  std::int64_t first = plan.m;
  Word sample;
  if (plan.sample) {
    auto [m, text] = load_sample(*plan.sample);
    first = m;
    sample = model.alphabet().parse(text);
    summary.runs = 1;
  } else {
    const UniformSource u = source_for(plan, 0);
    summary.runs = 1;
    const auto result = simulate(plan, u, f);
    if (!result) {
      summary.aborted = 1;
      return;
    }
    const WordView window = result->window();
    sample.assign(window.begin(), window.end());
    const auto hidden = hidden_regeneration(u, plan.m, plan.n, plan.horizon, f);
    auto csv = open_output(plan.out / "hidden.csv", summary);
    csv << "time,gap\n";
    for (std::size_t j = 0; j < hidden.times.size(); ++j) {
      csv << hidden.times[j] << ',' << (j == 0 ? std::string() : std::to_string(hidden.gaps[j - 1])) << '\n';
    }
    results["hidden_times"] = hidden.times.size();
    results["hidden_horizon"] = plan.horizon;
  }
  const auto visible = visible_regeneration(sample, first, model);
  auto csv = open_output(plan.out / "anchors.csv", summary);
  csv << "anchor,gap,block\n";
  for (std::size_t j = 0; j < visible.anchors.size(); ++j) {
    csv << visible.anchors[j] << ',' << (j == 0 ? std::string() : std::to_string(visible.gaps[j - 1])) << ','
        << model.alphabet().format(visible.blocks[j + 1]) << '\n';
  }
  results["sigma"] = sigma(model);
  results["anchors"] = visible.anchors.size();
  if (const auto t = visible.theta_x(visible.last)) {
    results["theta_x"] = *t;
  }
}

void run_auxiliary(const ExperimentPlan& plan, const ContextTreeModel& model, RunSummary& summary,
                   nlohmann::json& results) {
  const UpdateFunction f(model);
  const UniformSource u = source_for(plan, 0);
  summary.runs = 1;
  const auto trace = spontaneous_trace(u, plan.m, plan.n, f);
  auto fmt = [](std::uint64_t v) { return v == kInfinite ? std::string("inf") : std::to_string(v); };
  {
    auto csv = open_output(plan.out / "aux-trace.csv", summary);
    csv << "i,u,z,m,L\n";
    for (std::int64_t i = plan.m; i <= plan.n; ++i) {
      const auto z = trace.z_at(i);
      csv << i << ',' << u(i) << ',' << (z ? std::string(1, model.alphabet().glyph(*z)) : std::string("*")) << ','
          << fmt(trace.m_at(i)) << ',' << fmt(trace.L_at(i)) << '\n';
    }
  }
  const std::int64_t len = static_cast<std::int64_t>(model.reference().size());
  // blocks whose sites (b-1)|w|+1 .. b|w| lie inside the window
  auto floor_div = [](std::int64_t a, std::int64_t b) { return a / b - ((a % b != 0 && (a < 0) != (b < 0)) ? 1 : 0); };
  const std::int64_t lo = -floor_div(-(plan.m - 1), len) + 1;
  const std::int64_t hi = floor_div(plan.n, len);
  if (lo <= hi) {
    const auto rescaled = rescaled_trace(u, lo, hi, f);
    const auto d = d_process(rescaled, lo - 1);
    auto csv = open_output(plan.out / "aux-blocks.csv", summary);
    csv << "block,hit,mbar,Lbar,D\n";
    for (std::int64_t b = lo; b <= hi; ++b) {
      csv << b << ',' << (rescaled.hit_at(b) ? 1 : 0) << ',' << fmt(rescaled.mbar_at(b)) << ','
          << fmt(rescaled.Lbar_at(b)) << ',' << d.at(b) << '\n';
    }
  }
  if (plan.n >= 0) {
    const std::int64_t blocks = plan.n / len;
    if (const auto bar = theta_bar(u, blocks, f, plan.max_back)) {
      results["theta_bar"] = *bar;
      results["theta_bar_blocks"] = blocks;
    }
    const auto opening = static_cast<std::int64_t>(sigma(model)) * len;
    if (plan.n >= opening) {
      if (const auto prime = theta_prime(u, plan.n, f, plan.max_back)) {
        results["theta_prime"] = *prime;
      }
    }
  }
}

void run_oracle_compare(const ExperimentPlan& plan, const ContextTreeModel& model, RunSummary& summary,
                        nlohmann::json& results) {
  const auto length = static_cast<std::size_t>(plan.n - plan.m + 1);
  const auto cmp = compare_window_law(model, length, plan.grid, plan.horizon, plan.iterations, plan.seed, plan.max_back);
  summary.runs = cmp.runs;
  summary.aborted = cmp.aborted;
  auto csv = open_output(plan.out / "oracle-compare.csv", summary);
  csv << "window,oracle,empirical\n";
  for (std::size_t j = 0; j < cmp.words.size(); ++j) {
    csv << model.alphabet().format(cmp.words[j]) << ',' << cmp.reference[j] << ',' << cmp.empirical[j] << '\n';
  }
  results["total_variation"] = cmp.total_variation;
  results["standard_error"] = cmp.standard_error;
  results["unresolved"] = cmp.unresolved;
  results["balanced"] = cmp.balanced;
  results["paths"] = cmp.paths;
  summary.check = cmp.agrees();
  std::ostringstream msg;
  msg << "TV " << cmp.total_variation << " vs bound " << 4.0 * cmp.standard_error + cmp.unresolved
      << (cmp.agrees() ? " (pass)" : " (fail)");
  summary.message = msg.str();
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Sample:
      return "sample";
    case ExperimentKind::ThetaDistribution:
      return "theta-dist";
    case ExperimentKind::EpsilonSweep:
      return "eps-sweep";
    case ExperimentKind::Regeneration:
      return "regen";
    case ExperimentKind::AuxiliaryTrace:
      return "aux-trace";
    case ExperimentKind::OracleCompare:
      return "oracle-compare";
  }
  return "?";
}

ContextTreeModel sweep_instance(const ContextTreeModel& base, double epsilon) {
  const Alphabet& alphabet = base.alphabet();
  if (alphabet.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "sweep needs at least two symbols");
  }
  TransitionRules rules;
  rules.epsilon = epsilon;
  ProbabilityVector p(alphabet.size(), (1.0 - epsilon) / static_cast<double>(alphabet.size() - 1));
  p[0] = epsilon;
  rules.default_rule = p;
  ContextTreeModel model(Alphabet(alphabet.glyphs(), 1), base.reference(), base.ell(), std::move(rules));
  if (auto violations = validate(model); !violations.empty()) {
    throw SemanticError(std::move(violations));
  }
  return model;
}

std::vector<SweepRow> epsilon_sweep(const ContextTreeModel& base, const std::vector<double>& grid,
                                    std::uint64_t iterations, std::uint64_t seed_base, std::uint64_t max_back) {
  std::vector<SweepRow> rows;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const UpdateFunction f(sweep_instance(base, grid[g]));
    SweepRow row;
    row.epsilon = grid[g];
    double sum_sq = 0.0;
    for (std::uint64_t r = 0; r < iterations; ++r) {
      const auto u = UniformSource::counter(derive_seed(derive_seed(seed_base, g), r));
      ++row.runs;
      const auto result = simulate_backward_forward(u, 0, 0, f, max_back);
      if (!result) {
        ++row.aborted;
        continue;
      }
      const auto depth = static_cast<std::uint64_t>(-result->theta);
      row.sum_abs_theta += depth;
      row.sum_steps += result->steps;
      sum_sq += static_cast<double>(depth) * static_cast<double>(depth);
    }
    const double done = static_cast<double>(row.runs - row.aborted);
    if (done > 0) {
      row.mean_abs_theta = static_cast<double>(row.sum_abs_theta) / done;
      row.mean_steps = static_cast<double>(row.sum_steps) / done;
      const double var = done > 1 ? (sum_sq - done * row.mean_abs_theta * row.mean_abs_theta) / (done - 1) : 0.0;
      row.stderr_abs_theta = std::sqrt(std::max(var, 0.0) / done);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string line_chart_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                           const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& err) {
  constexpr double kWidth = 640;
  constexpr double kHeight = 420;
  constexpr double kLeft = 70;
  constexpr double kRight = 20;
  constexpr double kTop = 40;
  constexpr double kBottom = 60;
  double x0 = x.empty() ? 0.0 : *std::min_element(x.begin(), x.end());
  double x1 = x.empty() ? 1.0 : *std::max_element(x.begin(), x.end());
  double y1 = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    y1 = std::max(y1, y[j] + (j < err.size() ? err[j] : 0.0));
  }
  if (x1 <= x0) {
    x1 = x0 + 1.0;
  }
  if (y1 <= 0.0) {
    y1 = 1.0;
  }
  auto px = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * (kWidth - kLeft - kRight); };
  auto py = [&](double v) { return kHeight - kBottom - v / y1 * (kHeight - kTop - kBottom); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kWidth - kRight << "\" y2=\"" << py(0)
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << py(0)
      << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double yv = y1 * t / 4.0;
    const double xv = x0 + (x1 - x0) * t / 4.0;
    svg << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << yv << "</text>\n";
    svg << "<text x=\"" << px(xv) << "\" y=\"" << py(0) + 18 << "\" text-anchor=\"middle\">" << xv << "</text>\n";
  }
  svg << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">"
      << x_label << "</text>\n";
  svg << "<text x=\"18\" y=\"" << (kTop + py(0)) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (kTop + py(0)) / 2 << ")\">" << y_label << "</text>\n";
  svg << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"2\" points=\"";
  for (std::size_t j = 0; j < x.size(); ++j) {
    svg << (j == 0 ? "" : " ") << px(x[j]) << ',' << py(y[j]);
  }
  svg << "\"/>\n";
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double e = j < err.size() ? err[j] : 0.0;
    svg << "<line x1=\"" << px(x[j]) << "\" y1=\"" << py(y[j] - e) << "\" x2=\"" << px(x[j]) << "\" y2=\""
        << py(y[j] + e) << "\" stroke=\"#1f5fa8\"/>\n";
    svg << "<circle cx=\"" << px(x[j]) << "\" cy=\"" << py(y[j]) << "\" r=\"3\" fill=\"#1f5fa8\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

WindowComparison compare_window_law(const ContextTreeModel& model, std::size_t length, std::uint64_t grid,
                                    std::uint64_t depth, std::uint64_t runs, std::uint64_t seed_base,
                                    std::uint64_t max_back) {
  const auto law = brute_force_window_law(model, length, grid, depth);
  const UpdateFunction f(model);
  std::map<Word, std::uint64_t, WordLess> counts;
  WindowComparison cmp;
  for (std::uint64_t r = 0; r < runs; ++r) {
    const auto u = UniformSource::counter(derive_seed(seed_base, r));
    ++cmp.runs;
    const auto result = simulate_backward_forward(u, 1, static_cast<std::int64_t>(length), f, max_back);
    if (!result) {
      ++cmp.aborted;
      continue;
    }
    const WordView window = result->window();
    ++counts[Word(window.begin(), window.end())];
  }
  std::map<Word, std::pair<double, double>, WordLess> merged;
  for (const auto& [word, p] : law.law) {
    merged[word].first = p;
  }
  const double done = static_cast<double>(cmp.runs - cmp.aborted);
  for (const auto& [word, c] : counts) {
    merged[word].second = done > 0 ? static_cast<double>(c) / done : 0.0;
  }
  for (const auto& [word, pq] : merged) {
    cmp.words.push_back(word);
    cmp.reference.push_back(pq.first);
    cmp.empirical.push_back(pq.second);
    cmp.total_variation += 0.5 * std::abs(pq.first - pq.second);
    if (done > 0) {
      cmp.standard_error += 0.5 * std::sqrt(pq.first * (1.0 - pq.first) / done);
    }
  }
  cmp.unresolved = law.unresolved;
  cmp.balanced = law.balanced;
  cmp.paths = law.paths;
  return cmp;
}

RunSummary run_plan(const ExperimentPlan& plan, const ContextTreeModel& model) {
  if (plan.m > plan.n) {
    throw Error(ErrorCode::InvalidArgument, "window requires m <= n");
  }
  if (plan.iterations == 0) {
    throw Error(ErrorCode::InvalidArgument, "iterations must be at least 1");
  }
  std::filesystem::create_directories(plan.out);
  RunSummary summary;
  nlohmann::json results = nlohmann::json::object();
  switch (plan.kind) {
    case ExperimentKind::Sample:
      run_sample(plan, model, summary, results);
      break;
    case ExperimentKind::ThetaDistribution:
      run_theta_distribution(plan, model, summary, results);
      break;
    case ExperimentKind::EpsilonSweep:
      run_sweep(plan, model, summary, results);
      break;
    case ExperimentKind::Regeneration:
      run_regeneration(plan, model, summary, results);
      break;
    case ExperimentKind::AuxiliaryTrace:
      run_auxiliary(plan, model, summary, results);
      break;
    case ExperimentKind::OracleCompare:
      run_oracle_compare(plan, model, summary, results);
      break;
  }

  nlohmann::json manifest;
  manifest["tool"] = "vlmc";
  manifest["version"] = kVersion;
  manifest["kind"] = std::string(to_string(plan.kind));
  manifest["model_path"] = plan.model_path;
  manifest["model_hash"] = model_hash(model);
  manifest["seed"] = plan.seed;
  manifest["window"] = {plan.m, plan.n};
  manifest["iterations"] = plan.iterations;
  manifest["horizon"] = plan.horizon;
  manifest["max_back"] = plan.max_back;
  manifest["sampler"] = plan.sampler == Sampler::ByDefinition ? "definition" : "backward-forward";
  if (plan.trace) {
    manifest["trace"] = *plan.trace;
  }
  if (plan.sample) {
    manifest["sample"] = *plan.sample;
  }
  manifest["runs"] = summary.runs;
  manifest["aborted"] = summary.aborted;
  manifest["results"] = results;
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& file : summary.files) {
    outputs.push_back(file.filename().string());
  }
  manifest["outputs"] = outputs;
  const auto manifest_path = plan.out / "manifest.json";
  std::ofstream(manifest_path) << manifest.dump(2) << '\n';
  summary.files.push_back(manifest_path);
  return summary;
}

}  // namespace vlmc
