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

#include "hqoc/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hqoc/error.hpp"

namespace hqoc {

namespace {

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

}  // namespace

MolecularSystem::MolecularSystem(Eigen::VectorXd energies,
                                 std::array<Eigen::MatrixXd, kFieldComponents> dipole,
                                 std::vector<std::string> labels)
    : energies_(std::move(energies)), dipole_(std::move(dipole)), labels_(std::move(labels)) {
  const auto q = energies_.size();
  if (q < 2) throw ConfigError("molecular system needs at least 2 states");
  if (!energies_.allFinite()) throw ConfigError("energies must be finite");
  for (Eigen::Index k = 1; k < energies_.size(); ++k) {
    if (energies_[k] < energies_[k - 1]) {
      throw ConfigError("energies must be sorted ascending (ground state first)");
    }
  }
  for (int a = 0; a < kFieldComponents; ++a) {
    const auto& d = dipole_[static_cast<std::size_t>(a)];
    if (d.rows() != q || d.cols() != q) {
      std::ostringstream msg;
      msg << "dipole component " << a << " must be " << q << "x" << q;
      throw ConfigError(msg.str());
    }
    if (!all_finite(d)) throw ConfigError("dipole entries must be finite");
    if ((d - d.transpose()).cwiseAbs().maxCoeff() > 0.0) {
      throw ConfigError("dipole matrices must be symmetric");
    }
  }
  if (!labels_.empty() && labels_.size() != static_cast<std::size_t>(q)) {
    throw ConfigError("labels must name every state");
  }
}

double MolecularSystem::gap(int from, int to) const {
  return std::abs(energies_(to) - energies_(from));
}

PulseParameters::PulseParameters(double duration, int n_harmonics, bool include_dc,
                                 std::vector<double> amplitudes,
                                 std::optional<double> amplitude_clamp)
    : duration_(duration),
      n_harmonics_(n_harmonics),
      include_dc_(include_dc),
      amplitudes_(std::move(amplitudes)),
      amplitude_clamp_(amplitude_clamp) {
  if (!(duration_ > 0.0) || !std::isfinite(duration_)) {
    throw ConfigError("pulse duration must be positive");
  }
  if (n_harmonics_ < 1) throw ConfigError("pulse needs at least one harmonic");
  if (amplitudes_.size() != static_cast<std::size_t>(n_coefficients())) {
    std::ostringstream msg;
    msg << "pulse expects " << n_coefficients() << " amplitudes (3 x " << n_harmonics_ + 1
        << "), got " << amplitudes_.size();
    throw ConfigError(msg.str());
  }
  if (amplitude_clamp_ && !(*amplitude_clamp_ >= 0.0)) {
    throw ConfigError("amplitude clamp must be non-negative");
  }
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    const double a = amplitudes_[i];
    if (!std::isfinite(a)) throw ConfigError("pulse amplitudes must be finite");
    if (!include_dc_ && i % static_cast<std::size_t>(n_harmonics_ + 1) == 0 && a != 0.0) {
      throw ConfigError("constant field terms must be zero when include_dc is false");
    }
    if (amplitude_clamp_ && std::abs(a) > *amplitude_clamp_) {
      throw ConfigError("pulse amplitude exceeds the amplitude clamp");
    }
  }
}

PulseParameters PulseParameters::zeros(double duration, int n_harmonics, bool include_dc,
                                       std::optional<double> amplitude_clamp) {
  const auto n = static_cast<std::size_t>(kFieldComponents * (std::max(n_harmonics, 0) + 1));
  return PulseParameters(duration, n_harmonics, include_dc, std::vector<double>(n, 0.0),
                         amplitude_clamp);
}

double PulseParameters::frequency(int harmonic) const {
  return static_cast<double>(harmonic) * std::numbers::pi / duration_;
}

PulseParameters PulseParameters::with_amplitudes(std::vector<double> amplitudes) const {
  return PulseParameters(duration_, n_harmonics_, include_dc_, std::move(amplitudes),
                         amplitude_clamp_);
}

PulseParameters PulseParameters::with_clamp(std::optional<double> clamp) const {
  return PulseParameters(duration_, n_harmonics_, include_dc_, amplitudes_, clamp);
}

PropagationGrid::PropagationGrid(double dt, int n_steps) : dt_(dt), n_steps_(n_steps) {
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw ConfigError("time step must be positive");
  if (n_steps_ < 0) throw ConfigError("number of steps must be non-negative");
}

PropagationGrid PropagationGrid::for_duration(double duration, double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const double ratio = duration / dt;
  const auto k = static_cast<int>(std::llround(ratio));
  PropagationGrid grid(dt, k);
  if (!grid.covers(duration)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "time step " << dt << " does not divide the duration " << duration;
    throw ConfigError(msg.str());
  }
  return grid;
}

std::vector<double> PropagationGrid::times() const {
  std::vector<double> out(static_cast<std::size_t>(n_steps_) + 1);
  for (int j = 0; j <= n_steps_; ++j) out[static_cast<std::size_t>(j)] = time(j);
  return out;
}

bool PropagationGrid::covers(double duration) const {
  return std::abs(this->duration() - duration) <= 1e-9 * std::abs(duration);
}

PenaltyMode parse_penalty_mode(const std::string& text) {
  if (text == "functional") return PenaltyMode::functional;
  if (text == "clamp") return PenaltyMode::clamp;
  if (text == "both") return PenaltyMode::both;
  throw ConfigError("unknown penalty mode '" + text + "' (functional|clamp|both)");
}

std::string to_string(PenaltyMode mode) {
  switch (mode) {
    case PenaltyMode::functional: return "functional";
    case PenaltyMode::clamp: return "clamp";
    case PenaltyMode::both: return "both";
  }
  return "functional";
}

void ControlProblem::validate() const {
  const int q = system.n_states();
  if (initial_state_index < 0 || initial_state_index >= q) {
    throw ConfigError("initial state index out of range");
  }
  if (target_state_index < 0 || target_state_index >= q) {
    throw ConfigError("target state index out of range");
  }
  if (!grid.covers(pulse_template.duration())) {
    throw ConfigError("propagation grid does not cover the pulse duration");
  }
  if (!std::isfinite(penalty_weight)) throw ConfigError("penalty weight must be finite");
}

FieldVector field_at(const PulseParameters& pulse, double t) {
  const double T = pulse.duration();
  const double slack = 1e-12 * T;
  if (!(t >= -slack && t <= T + slack)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "field requested at t = " << t << " outside [0, " << T << "]";
    throw DomainError(msg.str());
  }
  FieldVector e = FieldVector::Zero();
  const int m = pulse.n_harmonics();
  const double base = std::numbers::pi * t / T;
  for (int j = 1; j <= m; ++j) {
    const double s = std::sin(static_cast<double>(j) * base);
    for (int a = 0; a < kFieldComponents; ++a) e(a) += pulse.amplitude(a, j) * s;
  }
  if (pulse.include_dc()) {
    for (int a = 0; a < kFieldComponents; ++a) e(a) += pulse.amplitude(a, 0);
  }
  return e;
}

Eigen::MatrixXd hamiltonian_at(const MolecularSystem& system, const FieldVector& field) {
  if (!field.allFinite()) throw NumericalError("field must be finite");
  Eigen::MatrixXd h = system.energies().asDiagonal();
  for (int a = 0; a < kFieldComponents; ++a) {
    if (field(a) != 0.0) h.noalias() -= field(a) * system.dipole(a);
  }
  return h;
}

double fluence(const PulseParameters& pulse, const PropagationGrid& grid, double weight) {
  const std::vector<double> w(static_cast<std::size_t>(grid.n_steps()) + 1, weight);
  return fluence(pulse, grid, w);
}

double fluence(const PulseParameters& pulse, const PropagationGrid& grid,
               std::span<const double> weights) {
  if (weights.size() != static_cast<std::size_t>(grid.n_steps()) + 1) {
    throw ConfigError("fluence weights must have one entry per grid node");
  }
  if (!grid.covers(pulse.duration())) {
    throw ConfigError("propagation grid does not cover the pulse duration");
  }
  const int k = grid.n_steps();
  if (k == 0) return 0.0;
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double t = std::min(grid.time(j), pulse.duration());
    const double node = weights[static_cast<std::size_t>(j)] * field_at(pulse, t).squaredNorm();
    sum += (j == 0 || j == k) ? 0.5 * node : node;
  }
  return sum * grid.dt();
}

double objective_j(double target_population, const PulseParameters& pulse,
                   const PropagationGrid& grid, double weight) {
  return target_population - fluence(pulse, grid, weight);
}

int auto_harmonics(const MolecularSystem& system, double duration) {
  const auto& e = system.energies();
  const double top = e(e.size() - 1) - e(0);
  int m = static_cast<int>(std::floor(top * duration / std::numbers::pi)) + 1;
  return std::max(m, 1);
}

PulseParameters resonant_guess(const MolecularSystem& system, int initial, int target,
                               double duration, int n_harmonics, bool include_dc,
                               double amplitude) {
  const double omega = system.gap(initial, target);
  int j = static_cast<int>(std::lround(omega * duration / std::numbers::pi));
  j = std::clamp(j, 1, n_harmonics);
  auto pulse = PulseParameters::zeros(duration, n_harmonics, include_dc);
  std::vector<double> a(pulse.amplitudes().begin(), pulse.amplitudes().end());
  for (int c = 0; c < kFieldComponents; ++c) {
    a[static_cast<std::size_t>(PulseParameters::flat_index(n_harmonics, c, j))] = amplitude;
  }
  return pulse.with_amplitudes(std::move(a));
}

}  // namespace hqoc
