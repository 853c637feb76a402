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
#include <cmath>
#include <map>
#include <numeric>

#include "hqoc/optimize.hpp"
#include "objective.hpp"

namespace hqoc {

std::vector<std::vector<double>> initial_simplex(std::span<const double> guess, double zero_step,
                                                 double relative_step) {
  std::vector<std::vector<double>> simplex;
  simplex.emplace_back(guess.begin(), guess.end());
  for (std::size_t i = 0; i < guess.size(); ++i) {
    std::vector<double> v(guess.begin(), guess.end());
    v[i] = v[i] == 0.0 ? zero_step : v[i] * (1.0 + relative_step);
    simplex.push_back(std::move(v));
  }
  return simplex;
}

NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<std::vector<double>> simplex,
                                      const NelderMeadOptions& options) {
  if (simplex.size() < 2) throw ConfigError("Nelder-Mead needs at least two vertices");
  const std::size_t n = simplex.front().size();
  if (simplex.size() != n + 1) throw ConfigError("Nelder-Mead simplex needs n + 1 vertices");
  for (const auto& v : simplex)
    if (v.size() != n) throw ConfigError("simplex vertices differ in dimension");

  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double v = f(x);
    if (std::isnan(v)) throw NumericalError("objective returned NaN");
    return v;
  };
  std::vector<double> values(simplex.size());
  for (std::size_t i = 0; i < simplex.size(); ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(simplex.size());
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s;
    std::vector<double> v;
    for (std::size_t i : order) {
      s.push_back(std::move(simplex[i]));
      v.push_back(values[i]);
    }
    simplex = std::move(s);
    values = std::move(v);
  };
  sort_simplex();
  result.best_per_iteration.push_back(simplex.front());
  result.evaluations_per_iteration.push_back(result.evaluations);

  auto affine = [&](const std::vector<double>& c, const std::vector<double>& x, double t) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = c[k] + t * (x[k] - c[k]);
    return out;
  };

  while (result.iterations < options.max_iterations) {
    double f_spread = 0.0;
    double x_spread = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      f_spread = std::max(f_spread, std::abs(values[i] - values[0]));
      for (std::size_t k = 0; k < n; ++k)
        x_spread = std::max(x_spread, std::abs(simplex[i][k] - simplex[0][k]));
    }
    if (f_spread <= options.f_tolerance && x_spread <= options.x_tolerance) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / static_cast<double>(n);

    const std::vector<double> xr = affine(centroid, simplex[n], -options.reflection);
    const double fr = eval(xr);
    bool do_shrink = false;
    if (fr < values[0]) {
      const std::vector<double> xe = affine(centroid, xr, options.expansion);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[n] = xe;
        values[n] = fe;
      } else {
        simplex[n] = xr;
        values[n] = fr;
      }
    } else if (fr < values[n - 1]) {
      simplex[n] = xr;
      values[n] = fr;
    } else if (fr < values[n]) {
      const std::vector<double> xc = affine(centroid, xr, options.contraction);
      const double fc = eval(xc);
      if (fc <= fr) {
        simplex[n] = xc;
        values[n] = fc;
      } else {
        do_shrink = true;
      }
    } else {
      const std::vector<double> xc = affine(centroid, simplex[n], options.contraction);
      const double fc = eval(xc);
      if (fc < values[n]) {
        simplex[n] = xc;
        values[n] = fc;
      } else {
        do_shrink = true;
      }
    }
    if (do_shrink) {
      for (std::size_t i = 1; i <= n; ++i) {
        simplex[i] = affine(simplex[0], simplex[i], options.shrink);
        values[i] = eval(simplex[i]);
      }
    }
    sort_simplex();
    ++result.iterations;
    result.best_per_iteration.push_back(simplex.front());
    result.evaluations_per_iteration.push_back(result.evaluations);
  }
  result.x = simplex.front();
  result.value = values.front();
  return result;
}

OptimizationRun nelder_mead_run(const ControlProblem& problem, const BackendSpec& backend,
                                const PulseParameters& guess, const NelderMeadOptions& options) {
  problem.validate();
  backend.validate();
  detail::FreeObjective objective(problem, backend);
  const std::vector<double> x0 = objective.pack(guess.amplitudes());
  const NelderMeadResult nm = nelder_mead_minimize(
      [&](std::span<const double> x) { return -objective(x).j; },
      initial_simplex(x0), options);
  OptimizationRun run = objective.make_run("nelder-mead", nm.best_per_iteration, nm.evaluations_per_iteration);
  if (nm.converged) run.warnings.push_back("stopped early: simplex flat within tolerance");
  return run;
}

}  // namespace hqoc
