// Copyright 2026 The hqoc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>

#include "hqoc/optimize.hpp"
#include "objective.hpp"

namespace hqoc {

namespace detail {

FreeObjective::FreeObjective(const ControlProblem& problem, const BackendSpec& backend)
    : problem_(problem), backend_(backend) {
  const PulseParameters& tmpl = problem.pulse_template;
  for (int i = 0; i < tmpl.n_coefficients(); ++i)
    if (tmpl.is_free(i)) free_.push_back(i);
}

std::vector<double> FreeObjective::pack(std::span<const double> amplitudes) const {
  if (static_cast<int>(amplitudes.size()) != problem_.pulse_template.n_coefficients()) {
    throw ConfigError("guess pulse does not match the problem's pulse template");
  }
  std::vector<double> x;
  x.reserve(free_.size());
  for (int i : free_) x.push_back(amplitudes[static_cast<std::size_t>(i)]);
  return x;
}

std::vector<double> FreeObjective::unpack(std::span<const double> x) const {
  std::vector<double> a(static_cast<std::size_t>(problem_.pulse_template.n_coefficients()), 0.0);
  const auto clamp = problem_.pulse_template.amplitude_clamp();
  for (std::size_t k = 0; k < free_.size(); ++k) {
    double v = x[k];
    if (clamp) v = std::clamp(v, -*clamp, *clamp);
    a[static_cast<std::size_t>(free_[k])] = v;
  }
  return a;
}

const Evaluation& FreeObjective::operator()(std::span<const double> x) {
  std::vector<double> key(x.begin(), x.end());
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  ++evaluations_;
  const Evaluation ev = evaluate(unpack(x), problem_, backend_, 0, evaluations_ - 1);
  return cache_.emplace(std::move(key), ev).first->second;
}

OptimizationRun FreeObjective::make_run(const std::string& optimizer,
                                        const std::vector<std::vector<double>>& best_per_iteration,
                                        const std::vector<long long>& evaluations_per_iteration) {
  const long long objective_calls = evaluations_;
  OptimizationRun run;
  run.optimizer = optimizer;
  run.backend = backend_.describe();
  for (std::size_t i = 0; i < best_per_iteration.size(); ++i) {
    IterationRecord rec;
    rec.iteration = static_cast<int>(i);
    rec.phase = optimizer;
    rec.best = (*this)(best_per_iteration[i]);
    rec.mean_j = rec.best.j;
    rec.evaluations = i < evaluations_per_iteration.size() ? evaluations_per_iteration[i] : objective_calls;
    rec.best_amplitudes = unpack(best_per_iteration[i]);
    run.history.push_back(std::move(rec));
  }
  if (!run.history.empty()) {
    run.best.amplitudes = run.history.back().best_amplitudes;
    run.best.evaluation = run.history.back().best;
  }
  run.evaluations = evaluations_per_iteration.empty() ? objective_calls : evaluations_per_iteration.back();
  return run;
}

}  // namespace detail

void write_history_csv(const OptimizationRun& run, const std::filesystem::path& path,
                       const CsvProvenance& provenance) {
  CsvWriter csv(path, provenance,
                {"iteration", "phase", "best_J", "best_population", "best_fluence", "mean_J",
                 "std_J", "evaluations"});
  for (const auto& r : run.history) {
    csv.cell(r.iteration)
        .cell(r.phase)
        .cell(r.best.j)
        .cell(r.best.target_population)
        .cell(r.best.fluence)
        .cell(r.mean_j)
        .cell(r.std_j)
        .cell(r.evaluations);
    csv.end_row();
  }
}

Json run_summary_json(const OptimizationRun& run) {
  Json doc;
  doc["optimizer"] = run.optimizer;
  doc["backend"] = run.backend;
  doc["seed"] = run.seed;
  doc["iterations"] = run.history.size();
  doc["evaluations"] = run.evaluations;
  if (run.best.evaluation) {
    const Evaluation& e = *run.best.evaluation;
    doc["best"] = {{"J", e.j},
                   {"target_population", e.target_population},
                   {"fluence", e.fluence},
                   {"field_integral", e.field_integral},
                   {"leakage", e.leakage}};
  }
  doc["warnings"] = run.warnings;
  return doc;
}

}  // namespace hqoc
