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

// Gate-level circuit IR.
//
// Qubit 0 is the least significant bit of a basis-state index.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hqoc {

enum class GateKind { PauliX, Hadamard, SGate, SDagger, RotZ, RotX, RotY, Phase, CNOT };

/// Dump mnemonic: X H S SDG RZ RX RY PHASE CNOT.
std::string_view gate_name(GateKind kind);
GateKind parse_gate_name(std::string_view name);
bool has_angle(GateKind kind);
int gate_arity(GateKind kind);

struct Gate {
  GateKind kind = GateKind::PauliX;
  /// For CNOT: {control, target}. Single-qubit gates use qubits[0].
  std::array<int, 2> qubits{0, -1};
  double angle = 0.0;

  static Gate x(int q) { return {GateKind::PauliX, {q, -1}, 0.0}; }
  static Gate h(int q) { return {GateKind::Hadamard, {q, -1}, 0.0}; }
  static Gate s(int q) { return {GateKind::SGate, {q, -1}, 0.0}; }
  static Gate sdg(int q) { return {GateKind::SDagger, {q, -1}, 0.0}; }
  /// exp(-i angle Z / 2).
  static Gate rz(int q, double angle) { return {GateKind::RotZ, {q, -1}, angle}; }
  static Gate rx(int q, double angle) { return {GateKind::RotX, {q, -1}, angle}; }
  static Gate ry(int q, double angle) { return {GateKind::RotY, {q, -1}, angle}; }
  /// diag(1, exp(i angle)).
  static Gate phase(int q, double angle) { return {GateKind::Phase, {q, -1}, angle}; }
  static Gate cnot(int control, int target) { return {GateKind::CNOT, {control, target}, 0.0}; }

  int arity() const { return gate_arity(kind); }

  /// 2x2 unitary of a single-qubit gate, row-major {u00, u01, u10, u11}.
  std::array<std::complex<double>, 4> matrix() const;

  friend bool operator==(const Gate&, const Gate&) = default;
};

struct GateCounts {
  std::map<std::string, long long> by_kind;
  long long one_qubit = 0;
  long long two_qubit = 0;
  long long total() const { return one_qubit + two_qubit; }
};

class Circuit {
 public:
  explicit Circuit(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  /// Validates indices and angles; throws CircuitError.
  Circuit& add(const Gate& gate);
  /// Appends every gate (and step mark) of a circuit on the same register.
  Circuit& append(const Circuit& other);

  /// Records that a new propagation step starts at the next gate.
  void mark_step();
  int n_steps() const { return static_cast<int>(step_starts_.size()); }
  const std::vector<std::size_t>& step_starts() const { return step_starts_; }

  /// Everything before step `steps` (preparation plus the first `steps`
  /// steps). steps == n_steps() returns the whole circuit.
  Circuit prefix(int steps) const;
  /// Gates of step j alone.
  Circuit step(int j) const;

 private:
  int n_qubits_;
  std::vector<Gate> gates_;
  std::vector<std::size_t> step_starts_;
};

GateCounts gate_counts(const Circuit& circuit);

/// One gate per line, `KIND q0 [q1] [angle]`, angles with 17 significant
/// digits. A `# n_qubits N` header and `# step j` markers carry metadata.
void write_circuit(const Circuit& circuit, std::ostream& out);
std::string dump_circuit(const Circuit& circuit);
Circuit parse_circuit(std::istream& in);
Circuit parse_circuit(const std::string& text);

}  // namespace hqoc
