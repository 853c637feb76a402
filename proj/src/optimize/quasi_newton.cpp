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

#include <Eigen/Dense>

#include "hqoc/optimize.hpp"
#include "objective.hpp"

namespace hqoc {

std::vector<double> central_gradient(const std::function<double(std::span<const double>)>& f,
                                     std::span<const double> x, double step) {
  if (!(step > 0.0)) throw ConfigError("finite-difference step must be positive");
  std::vector<double> g(x.size());
  std::vector<double> probe(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double up = f(probe);
    probe[i] = x[i] - step;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

QuasiNewtonResult bfgs_minimize(const std::function<double(std::span<const double>)>& f,
                                std::vector<double> x0, const QuasiNewtonOptions& options) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;
  const Eigen::Index n = static_cast<Eigen::Index>(x0.size());
  if (n == 0) throw ConfigError("quasi-Newton needs at least one coordinate");

  QuasiNewtonResult result;
  auto eval = [&](std::span<const double> x) {
    ++result.evaluations;
    const double v = f(x);
    if (!std::isfinite(v)) throw NumericalError("objective is not finite");
    return v;
  };
  auto gradient = [&](const VectorXd& x) {
    const auto g = central_gradient(eval, std::span<const double>(x.data(), x.size()), options.step);
    return VectorXd(Eigen::Map<const VectorXd>(g.data(), n));
  };

  VectorXd x = Eigen::Map<const VectorXd>(x0.data(), n);
  double fx = eval(std::span<const double>(x.data(), x.size()));
  VectorXd g = gradient(x);
  MatrixXd h = MatrixXd::Identity(n, n);
  bool scaled = false;
  result.best_per_iteration.emplace_back(x.data(), x.data() + n);
  result.evaluations_per_iteration.push_back(result.evaluations);

  while (result.iterations < options.max_iterations) {
    if (g.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance) {
      result.converged = true;
      break;
    }
    VectorXd d = -h * g;
    if (g.dot(d) >= 0.0) {
      h.setIdentity();
      scaled = false;
      d = -g;
    }
    double alpha = 1.0;
    if (!scaled) alpha = std::min(1.0, options.initial_step / d.lpNorm<Eigen::Infinity>());
    const double slope = g.dot(d);
    VectorXd x_new;
    double f_new = fx;
    bool accepted = false;
    for (int k = 0; k <= options.max_backtracks; ++k) {
      x_new = x + alpha * d;
      f_new = eval(std::span<const double>(x_new.data(), x_new.size()));
      if (f_new <= fx + options.armijo * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= options.backtrack;
    }
    if (!accepted) break;
    const VectorXd g_new = gradient(x_new);
    const VectorXd s = x_new - x;
    const VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-300) {
      if (!scaled) {
        h *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const MatrixXd left = MatrixXd::Identity(n, n) - rho * s * y.transpose();
      h = left * h * left.transpose() + rho * s * s.transpose();
    }
    x = x_new;
    fx = f_new;
    g = g_new;
    ++result.iterations;
    result.best_per_iteration.emplace_back(x.data(), x.data() + n);
    result.evaluations_per_iteration.push_back(result.evaluations);
  }
  result.x.assign(x.data(), x.data() + n);
  result.value = fx;
  return result;
}

OptimizationRun quasi_newton_run(const ControlProblem& problem, const BackendSpec& backend,
                                 const PulseParameters& guess, const QuasiNewtonOptions& options) {
  problem.validate();
  backend.validate();
  detail::FreeObjective objective(problem, backend);
  const QuasiNewtonResult qn = bfgs_minimize(
      [&](std::span<const double> x) { return -objective(x).j; },
      objective.pack(guess.amplitudes()), options);
  OptimizationRun run = objective.make_run("quasi-newton", qn.best_per_iteration, qn.evaluations_per_iteration);
  if (backend.seed_dependent()) {
    run.warnings.push_back("sampled readout makes finite-difference gradients unreliable");
  }
  if (!qn.converged && qn.iterations < options.max_iterations) {
    run.warnings.push_back("line search failed to find a descent step");
  }
  return run;
}

}  // namespace hqoc
