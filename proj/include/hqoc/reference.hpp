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

// Classical wavefunction propagators in the N-level eigenstate basis.

#pragma once

#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "hqoc/io.hpp"
#include "hqoc/model.hpp"

namespace hqoc {

/// Coefficients c_k(t_j) sampled on an output grid.
struct WavefunctionTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
  /// (K+1) x Q, |c_k(t_j)|^2.
  Eigen::MatrixXd populations;
  /// |‖c(t_j)‖^2 - 1| for every stored sample.
  std::vector<double> norm_drift;

  int n_samples() const { return static_cast<int>(times.size()); }
  int n_states() const { return static_cast<int>(populations.cols()); }
  double max_norm_drift() const;
  const Eigen::VectorXcd& final_state() const { return states.back(); }

  /// Keeps only the samples at the given times (each must match a stored
  /// time to 1e-9 a.u.).
  WavefunctionTrajectory resampled(const std::vector<double>& at) const;
};

/// Explicit first-order Euler, c <- c - i H(t) c dt, with H sampled at the
/// left end of every fine step. Samples are stored on problem.grid, whose
/// step must be an integer multiple of dt_fine. No renormalization.
WavefunctionTrajectory propagate_euler(const ControlProblem& problem, const PulseParameters& pulse,
                                       double dt_fine);

/// Piecewise-constant exact propagation c <- exp(-i H(t_j) dt) c through the
/// eigendecomposition of the symmetric H(t_j).
WavefunctionTrajectory propagate_exact(const ControlProblem& problem, const PulseParameters& pulse,
                                       const PropagationGrid& grid);

/// exp(-i H dt) for a real symmetric H.
Eigen::MatrixXcd step_propagator(const Eigen::MatrixXd& hamiltonian, double dt);

/// max over samples and states of |P_a - P_b|. Grids must agree.
double max_abs_deviation(const WavefunctionTrajectory& a, const WavefunctionTrajectory& b);

/// Per-sample max over states of |P_a - P_b|.
std::vector<double> deviation_trace(const WavefunctionTrajectory& a,
                                    const WavefunctionTrajectory& b);

enum class TrajectoryColumns { populations, amplitudes };

void write_trajectory_csv(const WavefunctionTrajectory& trajectory,
                          const std::filesystem::path& path, const CsvProvenance& provenance,
                          TrajectoryColumns columns = TrajectoryColumns::populations);

}  // namespace hqoc
