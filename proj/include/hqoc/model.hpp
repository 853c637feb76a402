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

// Molecular system, laser-field parameterization and the control functional.
//
// All quantities are in atomic units: energies in hartree, time in a.u. of
// time, field amplitudes in a.u. of electric field.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hqoc {

inline constexpr int kFieldComponents = 3;

using FieldVector = Eigen::Vector3d;

/// N-level electronic system: state energies e_k and the cartesian
/// components of the (real, symmetric) dipole matrix.
class MolecularSystem {
 public:
  MolecularSystem(Eigen::VectorXd energies,
                  std::array<Eigen::MatrixXd, kFieldComponents> dipole,
                  std::vector<std::string> labels = {});

  int n_states() const { return static_cast<int>(energies_.size()); }
  const Eigen::VectorXd& energies() const { return energies_; }
  const Eigen::MatrixXd& dipole(int component) const { return dipole_.at(component); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Transition frequency between two states (hartree == rad / a.u. time).
  double gap(int from, int to) const;

 private:
  Eigen::VectorXd energies_;
  std::array<Eigen::MatrixXd, kFieldComponents> dipole_;
  std::vector<std::string> labels_;
};

/// Harmonic expansion of the field:
///   E_alpha(t) = a_{0,alpha} + sum_{j=1..M} a_{j,alpha} sin(j pi t / T).
/// Amplitudes are stored row-major as a 3 x (M+1) array; column 0 holds the
/// constant term and is forced to zero when include_dc is false.
class PulseParameters {
 public:
  PulseParameters(double duration, int n_harmonics, bool include_dc,
                  std::vector<double> amplitudes,
                  std::optional<double> amplitude_clamp = std::nullopt);

  static PulseParameters zeros(double duration, int n_harmonics, bool include_dc,
                               std::optional<double> amplitude_clamp = std::nullopt);

  double duration() const { return duration_; }
  int n_harmonics() const { return n_harmonics_; }
  bool include_dc() const { return include_dc_; }
  std::optional<double> amplitude_clamp() const { return amplitude_clamp_; }

  int n_coefficients() const { return kFieldComponents * (n_harmonics_ + 1); }
  static int flat_index(int n_harmonics, int component, int harmonic) {
    return component * (n_harmonics + 1) + harmonic;
  }
  double amplitude(int component, int harmonic) const {
    return amplitudes_[static_cast<std::size_t>(flat_index(n_harmonics_, component, harmonic))];
  }
  std::span<const double> amplitudes() const { return amplitudes_; }

  /// False for the constant-term slots of a pulse without a dc component.
  bool is_free(int flat) const { return include_dc_ || flat % (n_harmonics_ + 1) != 0; }

  /// omega_j = j pi / T.
  double frequency(int harmonic) const;

  /// Same template, new amplitudes (validated against the clamp).
  PulseParameters with_amplitudes(std::vector<double> amplitudes) const;
  PulseParameters with_clamp(std::optional<double> clamp) const;

 private:
  double duration_;
  int n_harmonics_;
  bool include_dc_;
  std::vector<double> amplitudes_;
  std::optional<double> amplitude_clamp_;
};

/// Uniform time grid t_j = j * dt, j = 0..K, with K * dt == T.
class PropagationGrid {
 public:
  PropagationGrid(double dt, int n_steps);

  /// Grid covering [0, duration]; throws ConfigError when dt does not
  /// divide the duration to one part in 1e9.
  static PropagationGrid for_duration(double duration, double dt);

  double dt() const { return dt_; }
  int n_steps() const { return n_steps_; }
  double time(int j) const { return static_cast<double>(j) * dt_; }
  double duration() const { return static_cast<double>(n_steps_) * dt_; }
  std::vector<double> times() const;

  /// True when duration() equals T to one part in 1e9.
  bool covers(double duration) const;

 private:
  double dt_;
  int n_steps_;
};

enum class PenaltyMode { functional, clamp, both };

PenaltyMode parse_penalty_mode(const std::string& text);
std::string to_string(PenaltyMode mode);

/// Population-transfer problem: maximize the target population at T minus
/// the weighted fluence of the field.
struct ControlProblem {
  MolecularSystem system;
  int initial_state_index = 0;
  int target_state_index = 1;
  PulseParameters pulse_template;
  PropagationGrid grid;
  double penalty_weight = 1.0;
  PenaltyMode penalty_mode = PenaltyMode::functional;

  /// Checks indices and grid/pulse consistency; throws ConfigError.
  void validate() const;

  /// Weight entering J: zero in pure clamp mode.
  double effective_weight() const {
    return penalty_mode == PenaltyMode::clamp ? 0.0 : penalty_weight;
  }
};

FieldVector field_at(const PulseParameters& pulse, double t);

/// H = diag(e) - sum_alpha field_alpha * dipole_alpha.
Eigen::MatrixXd hamiltonian_at(const MolecularSystem& system, const FieldVector& field);

/// Trapezoidal quadrature of weight * |E(t)|^2 on the grid.
double fluence(const PulseParameters& pulse, const PropagationGrid& grid, double weight);

/// Per-node weights (size K+1) for time-dependent envelopes.
double fluence(const PulseParameters& pulse, const PropagationGrid& grid,
               std::span<const double> weights);

/// J = target population - fluence.
double objective_j(double target_population, const PulseParameters& pulse,
                   const PropagationGrid& grid, double weight);

/// Smallest M whose top frequency M pi / T exceeds the largest excitation
/// energy of the system.
int auto_harmonics(const MolecularSystem& system, double duration);

/// Sinusoidal guess resonant with initial -> target: the harmonic closest to
/// the transition frequency gets `amplitude` on all three components.
PulseParameters resonant_guess(const MolecularSystem& system, int initial, int target,
                               double duration, int n_harmonics, bool include_dc,
                               double amplitude);

}  // namespace hqoc
