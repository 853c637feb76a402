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

#include "hqoc/reference.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "hqoc/error.hpp"

namespace hqoc {

namespace {

using cd = std::complex<double>;

Eigen::VectorXcd unit_state(int q, int index) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(q);
  c(index) = 1.0;
  return c;
}

void record(WavefunctionTrajectory& traj, int row, double t, const Eigen::VectorXcd& c) {
  traj.times[static_cast<std::size_t>(row)] = t;
  traj.states[static_cast<std::size_t>(row)] = c;
  traj.populations.row(row) = c.cwiseAbs2().transpose();
  traj.norm_drift[static_cast<std::size_t>(row)] = std::abs(c.squaredNorm() - 1.0);
}

WavefunctionTrajectory allocate(int samples, int q) {
  WavefunctionTrajectory traj;
  const auto n = static_cast<std::size_t>(samples);
  traj.times.resize(n);
  traj.states.resize(n);
  traj.norm_drift.resize(n);
  traj.populations = Eigen::MatrixXd::Zero(samples, q);
  return traj;
}

}  // namespace

double WavefunctionTrajectory::max_norm_drift() const {
  return norm_drift.empty() ? 0.0 : *std::max_element(norm_drift.begin(), norm_drift.end());
}

WavefunctionTrajectory WavefunctionTrajectory::resampled(const std::vector<double>& at) const {
  auto out = allocate(static_cast<int>(at.size()), n_states());
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < at.size(); ++i) {
    while (cursor < times.size() && times[cursor] < at[i] - 1e-9) ++cursor;
    if (cursor == times.size() || std::abs(times[cursor] - at[i]) > 1e-9) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "trajectory has no sample at t = " << at[i];
      throw ConfigError(msg.str());
    }
    record(out, static_cast<int>(i), times[cursor], states[cursor]);
    out.norm_drift[i] = norm_drift[cursor];
  }
  return out;
}

WavefunctionTrajectory propagate_euler(const ControlProblem& problem, const PulseParameters& pulse,
                                       double dt_fine) {
  problem.validate();
  const auto& grid = problem.grid;
  if (!(dt_fine > 0.0)) throw ConfigError("Euler step must be positive");
  const double ratio = grid.dt() / dt_fine;
  const auto stride = static_cast<long long>(std::llround(ratio));
  if (stride < 1 || std::abs(ratio - static_cast<double>(stride)) > 1e-9 * ratio) {
    throw ConfigError("Euler step must divide the output time step");
  }
  const int q = problem.system.n_states();
  auto traj = allocate(grid.n_steps() + 1, q);
  Eigen::VectorXcd c = unit_state(q, problem.initial_state_index);
  record(traj, 0, 0.0, c);
  Eigen::VectorXcd hc(q);
  const cd minus_i_dt(0.0, -dt_fine);
  const long long total = stride * grid.n_steps();
  for (long long s = 0; s < total; ++s) {
    const double t = static_cast<double>(s) * dt_fine;
    const Eigen::MatrixXd h = hamiltonian_at(problem.system, field_at(pulse, t));
    hc.noalias() = h.cast<cd>() * c;
    c += minus_i_dt * hc;
    if ((s + 1) % stride == 0) {
      if (!c.allFinite()) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "Euler propagation diverged at t = " << t + dt_fine;
        throw NumericalError(msg.str());
      }
      const int row = static_cast<int>((s + 1) / stride);
      record(traj, row, grid.time(row), c);
    }
  }
  return traj;
}

Eigen::MatrixXcd step_propagator(const Eigen::MatrixXd& hamiltonian, double dt) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hamiltonian);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Eigen::MatrixXd& v = eig.eigenvectors();
  Eigen::VectorXcd phases(v.rows());
  for (Eigen::Index k = 0; k < v.rows(); ++k) {
    phases(k) = std::polar(1.0, -eig.eigenvalues()(k) * dt);
  }
  const Eigen::MatrixXcd vc = v.cast<cd>();
  return vc * phases.asDiagonal() * vc.transpose();
}

WavefunctionTrajectory propagate_exact(const ControlProblem& problem, const PulseParameters& pulse,
                                       const PropagationGrid& grid) {
  problem.validate();
  if (!grid.covers(pulse.duration())) {
    throw ConfigError("propagation grid does not cover the pulse duration");
  }
  const int q = problem.system.n_states();
  auto traj = allocate(grid.n_steps() + 1, q);
  Eigen::VectorXcd c = unit_state(q, problem.initial_state_index);
  record(traj, 0, 0.0, c);
  for (int j = 0; j < grid.n_steps(); ++j) {
    const Eigen::MatrixXd h = hamiltonian_at(problem.system, field_at(pulse, grid.time(j)));
    c = step_propagator(h, grid.dt()) * c;
    record(traj, j + 1, grid.time(j + 1), c);
  }
  return traj;
}

std::vector<double> deviation_trace(const WavefunctionTrajectory& a,
                                    const WavefunctionTrajectory& b) {
  if (a.times.size() != b.times.size() || a.n_states() != b.n_states()) {
    throw ConfigError("trajectories have different shapes");
  }
  std::vector<double> out(a.times.size());
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    if (std::abs(a.times[i] - b.times[i]) > 1e-9) {
      throw ConfigError("trajectories are sampled on different time grids");
    }
    const auto row = static_cast<Eigen::Index>(i);
    out[i] = (a.populations.row(row) - b.populations.row(row)).cwiseAbs().maxCoeff();
  }
  return out;
}

double max_abs_deviation(const WavefunctionTrajectory& a, const WavefunctionTrajectory& b) {
  const auto trace = deviation_trace(a, b);
  return trace.empty() ? 0.0 : *std::max_element(trace.begin(), trace.end());
}

void write_trajectory_csv(const WavefunctionTrajectory& trajectory,
                          const std::filesystem::path& path, const CsvProvenance& provenance,
                          TrajectoryColumns columns) {
  std::vector<std::string> header{"time"};
  const int q = trajectory.n_states();
  for (int k = 0; k < q; ++k) {
    if (columns == TrajectoryColumns::amplitudes) {
      header.push_back("re_c" + std::to_string(k));
      header.push_back("im_c" + std::to_string(k));
    } else {
      header.push_back("P" + std::to_string(k));
    }
  }
  CsvWriter csv(path, provenance, header);
  for (int i = 0; i < trajectory.n_samples(); ++i) {
    csv.cell(trajectory.times[static_cast<std::size_t>(i)]);
    for (int k = 0; k < q; ++k) {
      if (columns == TrajectoryColumns::amplitudes) {
        const cd c = trajectory.states[static_cast<std::size_t>(i)](k);
        csv.cell(c.real()).cell(c.imag());
      } else {
        csv.cell(trajectory.populations(i, k));
      }
    }
    csv.end_row();
  }
}

}  // namespace hqoc
