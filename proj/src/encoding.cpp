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

#include "hqoc/encoding.hpp"

#include <cmath>
#include <set>

#include "hqoc/error.hpp"

namespace hqoc {

bool PauliCoefficients::is_coupled(int q, int p) const {
  return std::abs(alpha(q, p)) >= kCouplingCutoff;
}

std::vector<std::pair<int, int>> PauliCoefficients::coupled_pairs() const {
  std::vector<std::pair<int, int>> out;
  const int n = n_states();
  for (int q = 0; q < n; ++q)
    for (int p = q + 1; p < n; ++p)
      if (is_coupled(q, p)) out.emplace_back(q, p);
  return out;
}

Eigen::MatrixXd PauliCoefficients::hamiltonian() const {
  Eigen::MatrixXd h = -alpha;
  h.diagonal() = theta;
  return h;
}

CircuitVariant parse_variant(const std::string& text) {
  if (text == "jw-full") return CircuitVariant::JwFull;
  if (text == "single-occ") return CircuitVariant::SingleOccupancy;
  if (text == "single-occ-reordered") return CircuitVariant::SingleOccupancyReordered;
  throw ConfigError("unknown circuit variant '" + text +
                    "' (jw-full|single-occ|single-occ-reordered)");
}

std::string to_string(CircuitVariant variant) {
  switch (variant) {
    case CircuitVariant::JwFull: return "jw-full";
    case CircuitVariant::SingleOccupancy: return "single-occ";
    case CircuitVariant::SingleOccupancyReordered: return "single-occ-reordered";
  }
  return "single-occ";
}

std::vector<CircuitVariant> all_variants() {
  return {CircuitVariant::JwFull, CircuitVariant::SingleOccupancy,
          CircuitVariant::SingleOccupancyReordered};
}

PauliCoefficients pauli_coefficients(const MolecularSystem& system, const FieldVector& field) {
  if (!field.allFinite()) throw NumericalError("field must be finite");
  const int q = system.n_states();
  PauliCoefficients c;
  c.theta = system.energies();
  c.alpha = Eigen::MatrixXd::Zero(q, q);
  for (int a = 0; a < kFieldComponents; ++a) {
    if (field(a) == 0.0) continue;
    const Eigen::MatrixXd& mu = system.dipole(a);
    c.theta -= field(a) * mu.diagonal();
    c.alpha += field(a) * mu;
  }
  c.alpha.diagonal().setZero();
  return c;
}

Circuit prepare_basis_state(int n_qubits, int state) {
  Circuit c(n_qubits);
  c.add(Gate::x(state));
  return c;
}

Circuit prepare_ground(int n_qubits) { return prepare_basis_state(n_qubits, 0); }

Circuit diagonal_layer(const Eigen::VectorXd& theta, double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  Circuit c(static_cast<int>(theta.size()));
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    c.add(Gate::phase(static_cast<int>(k), -theta(k) * dt));
  }
  return c;
}

namespace {

void basis_in(Circuit& c, int qubit, PauliAxis axis) {
  if (axis == PauliAxis::Y) c.add(Gate::sdg(qubit));
  c.add(Gate::h(qubit));
}

void basis_out(Circuit& c, int qubit, PauliAxis axis) {
  c.add(Gate::h(qubit));
  if (axis == PauliAxis::Y) c.add(Gate::s(qubit));
}

void parity_core(Circuit& c, int q, int p, double angle, bool z_string) {
  if (z_string) {
    for (int k = q; k < p; ++k) c.add(Gate::cnot(k, k + 1));
    c.add(Gate::rz(p, angle));
    for (int k = p - 1; k >= q; --k) c.add(Gate::cnot(k, k + 1));
  } else {
    c.add(Gate::cnot(q, p));
    c.add(Gate::rz(p, angle));
    c.add(Gate::cnot(q, p));
  }
}

void check_pair(int n_qubits, int q, int p) {
  if (q >= p) throw ConfigError("pair circuits need q < p");
  if (q < 0 || p >= n_qubits) throw CircuitError("pair qubit outside the register");
}

}  // namespace

Circuit pauli_string_exponential(int n_qubits, int q, int p, PauliAxis axis, double angle,
                                 bool z_string) {
  check_pair(n_qubits, q, p);
  Circuit c(n_qubits);
  basis_in(c, q, axis);
  basis_in(c, p, axis);
  parity_core(c, q, p, angle, z_string);
  basis_out(c, q, axis);
  basis_out(c, p, axis);
  return c;
}

Circuit gamma_pair(int n_qubits, int q, int p, double coupling, double dt,
                   CircuitVariant variant) {
  check_pair(n_qubits, q, p);
  if (!std::isfinite(coupling)) throw NumericalError("coupling must be finite");
  const bool z_string = variant == CircuitVariant::JwFull;
  const double angle = coupling * dt;
  Circuit c(n_qubits);
  c.append(pauli_string_exponential(n_qubits, q, p, PauliAxis::X, angle, z_string));
  c.append(pauli_string_exponential(n_qubits, q, p, PauliAxis::Y, angle, z_string));
  return c;
}

Circuit gamma_core(int n_qubits, int q, int p, double coupling, double dt) {
  check_pair(n_qubits, q, p);
  Circuit c(n_qubits);
  parity_core(c, q, p, coupling * dt, false);
  return c;
}

Circuit trotter_step(const MolecularSystem& system, const FieldVector& field, double dt,
                     CircuitVariant variant) {
  const PauliCoefficients coeff = pauli_coefficients(system, field);
  const int n = coeff.n_states();
  Circuit c = diagonal_layer(coeff.theta, dt);
  const auto pairs = coeff.coupled_pairs();
  if (pairs.empty()) return c;
  // The generator of a pair is -alpha_qp (XX + YY) / 2.
  if (variant != CircuitVariant::SingleOccupancyReordered) {
    for (const auto& [q, p] : pairs) c.append(gamma_pair(n, q, p, -coeff.alpha(q, p), dt, variant));
    return c;
  }
  std::set<int> involved;
  for (const auto& [q, p] : pairs) {
    involved.insert(q);
    involved.insert(p);
  }
  for (const PauliAxis axis : {PauliAxis::X, PauliAxis::Y}) {
    for (int k : involved) basis_in(c, k, axis);
    for (const auto& [q, p] : pairs) c.append(gamma_core(n, q, p, -coeff.alpha(q, p), dt));
    for (int k : involved) basis_out(c, k, axis);
  }
  return c;
}

Circuit evolution_circuit(const ControlProblem& problem, const PulseParameters& pulse,
                          const PropagationGrid& grid, CircuitVariant variant) {
  problem.validate();
  if (!grid.covers(pulse.duration())) {
    throw ConfigError("propagation grid does not cover the pulse duration");
  }
  const int n = problem.system.n_states();
  Circuit c = prepare_basis_state(n, problem.initial_state_index);
  for (int j = 0; j < grid.n_steps(); ++j) {
    c.mark_step();
    c.append(trotter_step(problem.system, field_at(pulse, grid.time(j)), grid.dt(), variant));
  }
  return c;
}

namespace {

void check_width(int n_qubits, int n_states) {
  if (n_qubits != n_states) throw ConfigError("register width must equal the number of states");
}

}  // namespace

DecodedPopulations decode_populations(const StateVector& state, int n_states) {
  check_width(state.n_qubits(), n_states);
  DecodedPopulations d;
  d.populations.resize(n_states);
  for (int k = 0; k < n_states; ++k) d.populations(k) = state.probability(std::uint64_t{1} << k);
  d.leakage = 1.0 - d.populations.sum();
  return d;
}

DecodedPopulations decode_populations(const DensityMatrix& rho, int n_states) {
  check_width(rho.n_qubits(), n_states);
  DecodedPopulations d;
  d.populations.resize(n_states);
  for (int k = 0; k < n_states; ++k) {
    const std::size_t i = std::size_t{1} << k;
    d.populations(k) = rho(i, i).real();
  }
  d.leakage = 1.0 - d.populations.sum();
  return d;
}

DecodedPopulations decode_populations(const Histogram& counts, int n_states) {
  long long shots = 0;
  for (const auto& [bits, c] : counts) {
    if (bits.size() != static_cast<std::size_t>(n_states)) {
      throw ConfigError("histogram bitstrings do not match the number of states");
    }
    shots += c;
  }
  if (shots == 0) throw ConfigError("empty histogram");
  DecodedPopulations d;
  d.populations.resize(n_states);
  for (int k = 0; k < n_states; ++k) {
    const auto it = counts.find(bitstring(std::uint64_t{1} << k, n_states));
    d.populations(k) =
        it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(shots);
  }
  d.leakage = 1.0 - d.populations.sum();
  return d;
}

WavefunctionTrajectory circuit_trajectory(const ControlProblem& problem,
                                          const PulseParameters& pulse,
                                          const PropagationGrid& grid, CircuitVariant variant) {
  const Circuit circuit = evolution_circuit(problem, pulse, grid, variant);
  const int n = circuit.n_qubits();
  WavefunctionTrajectory traj;
  traj.populations.resize(grid.n_steps() + 1, n);
  StateVector psi(n);
  auto record = [&](int j) {
    Eigen::VectorXcd c(n);
    for (int k = 0; k < n; ++k) c(k) = psi.amplitude(std::uint64_t{1} << k);
    traj.times.push_back(grid.time(j));
    traj.populations.row(j) = c.cwiseAbs2().transpose();
    traj.norm_drift.push_back(std::abs(1.0 - traj.populations.row(j).sum()));
    traj.states.push_back(std::move(c));
  };
  psi.apply(circuit.prefix(0));
  record(0);
  for (int j = 0; j < grid.n_steps(); ++j) {
    psi.apply(circuit.step(j));
    record(j + 1);
  }
  return traj;
}

Eigen::MatrixXcd project_single_excitation(const Circuit& circuit) {
  const int n = circuit.n_qubits();
  Eigen::MatrixXcd u(n, n);
  for (int col = 0; col < n; ++col) {
    const StateVector out = apply_statevector(circuit, StateVector::basis(n, std::uint64_t{1} << col));
    for (int row = 0; row < n; ++row) u(row, col) = out.amplitude(std::uint64_t{1} << row);
  }
  return u;
}

}  // namespace hqoc
