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

// One-hot encoding of the N-level system on N qubits and synthesis of the
// piecewise-constant Trotter evolution circuit.
//
// State k maps to the bitstring with only qubit k set. In that subspace the
// Hamiltonian reads
//
//   H = sum_k theta_k (1 - Z_k) / 2 - sum_{q<p} alpha_qp (X_q X_p + Y_q Y_p) / 2
//
// with theta_k = e_k - E.mu_kk and alpha_qp = E.mu_qp, so that H restricted
// to the one-hot states reproduces diag(e) - E.mu exactly.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hqoc/circuit.hpp"
#include "hqoc/emulator.hpp"
#include "hqoc/model.hpp"
#include "hqoc/reference.hpp"

namespace hqoc {

/// Couplings below this magnitude (hartree) are treated as absent.
inline constexpr double kCouplingCutoff = 1e-14;

struct PauliCoefficients {
  Eigen::VectorXd theta;
  /// Symmetric, zero diagonal.
  Eigen::MatrixXd alpha;

  int n_states() const { return static_cast<int>(theta.size()); }
  bool is_coupled(int q, int p) const;
  /// Coupled pairs (q < p) in ascending (q, p) order.
  std::vector<std::pair<int, int>> coupled_pairs() const;
  /// Q x Q matrix diag(theta) - alpha.
  Eigen::MatrixXd hamiltonian() const;
};

enum class CircuitVariant { JwFull, SingleOccupancy, SingleOccupancyReordered };

/// jw-full | single-occ | single-occ-reordered.
CircuitVariant parse_variant(const std::string& text);
std::string to_string(CircuitVariant variant);
std::vector<CircuitVariant> all_variants();

PauliCoefficients pauli_coefficients(const MolecularSystem& system, const FieldVector& field);

/// X on qubit 0: the one-hot encoding of the ground state.
Circuit prepare_ground(int n_qubits);
Circuit prepare_basis_state(int n_qubits, int state);

/// PHASE(-theta_k dt) on every qubit k: exp(-i theta_k (1 - Z_k) dt / 2).
Circuit diagonal_layer(const Eigen::VectorXd& theta, double dt);

enum class PauliAxis { X, Y };

/// exp(-i (angle/2) P_q [Z_{q+1} ... Z_{p-1}] P_p) with P = X or Y, built as
/// basis change, CNOT ladder, RZ(angle) on p, ladder, basis change back.
/// The Z string is included only when `z_string` is true.
Circuit pauli_string_exponential(int n_qubits, int q, int p, PauliAxis axis, double angle,
                                 bool z_string);

/// exp(-i coupling (X_q X_p + Y_q Y_p) dt / 2) as Gamma_x followed by
/// Gamma_y, each with 2 CNOTs (single-occ) or 2 (p - q) CNOTs (jw-full).
/// For the reordered variant this is the pair's two fragments back to back.
Circuit gamma_pair(int n_qubits, int q, int p, double coupling, double dt, CircuitVariant variant);

/// Pair fragments without basis changes, for regrouping across pairs:
/// CNOT(q,p) RZ(coupling dt) CNOT(q,p).
Circuit gamma_core(int n_qubits, int q, int p, double coupling, double dt);

/// One step: diagonal layer, then the coupled pairs in ascending (q, p)
/// order. The reordered variant emits every X-type fragment inside one
/// shared basis change, then every Y-type fragment inside another.
Circuit trotter_step(const MolecularSystem& system, const FieldVector& field, double dt,
                     CircuitVariant variant);

/// State preparation followed by one marked step per grid interval, with the
/// field sampled at the left end of each interval.
Circuit evolution_circuit(const ControlProblem& problem, const PulseParameters& pulse,
                          const PropagationGrid& grid, CircuitVariant variant);

struct DecodedPopulations {
  Eigen::VectorXd populations;
  /// 1 - sum of one-hot populations.
  double leakage = 0.0;
};

DecodedPopulations decode_populations(const StateVector& state, int n_states);
DecodedPopulations decode_populations(const DensityMatrix& rho, int n_states);
DecodedPopulations decode_populations(const Histogram& counts, int n_states);

/// Noise-free statevector run of the evolution circuit, sampled after every
/// step. States hold the one-hot amplitudes; norm_drift holds the leakage.
WavefunctionTrajectory circuit_trajectory(const ControlProblem& problem,
                                          const PulseParameters& pulse,
                                          const PropagationGrid& grid, CircuitVariant variant);

/// Q x Q matrix of one-hot amplitudes <e_r| C |e_c> of a circuit.
Eigen::MatrixXcd project_single_excitation(const Circuit& circuit);

}  // namespace hqoc
