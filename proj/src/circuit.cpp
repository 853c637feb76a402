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

#include "hqoc/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hqoc/error.hpp"

namespace hqoc {

namespace {

using cd = std::complex<double>;

constexpr std::array<std::pair<GateKind, std::string_view>, 9> kNames{{
    {GateKind::PauliX, "X"},
    {GateKind::Hadamard, "H"},
    {GateKind::SGate, "S"},
    {GateKind::SDagger, "SDG"},
    {GateKind::RotZ, "RZ"},
    {GateKind::RotX, "RX"},
    {GateKind::RotY, "RY"},
    {GateKind::Phase, "PHASE"},
    {GateKind::CNOT, "CNOT"},
}};

}  // namespace

std::string_view gate_name(GateKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "?";
}

GateKind parse_gate_name(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  throw CircuitError("unknown gate '" + std::string(name) + "'");
}

bool has_angle(GateKind kind) {
  return kind == GateKind::RotZ || kind == GateKind::RotX || kind == GateKind::RotY ||
         kind == GateKind::Phase;
}

int gate_arity(GateKind kind) { return kind == GateKind::CNOT ? 2 : 1; }

std::array<cd, 4> Gate::matrix() const {
  const double r = 1.0 / std::numbers::sqrt2;
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  switch (kind) {
    case GateKind::PauliX: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Hadamard: return {r, r, r, -r};
    case GateKind::SGate: return {1.0, 0.0, 0.0, cd(0.0, 1.0)};
    case GateKind::SDagger: return {1.0, 0.0, 0.0, cd(0.0, -1.0)};
    case GateKind::RotZ: return {std::polar(1.0, -angle / 2.0), 0.0, 0.0, std::polar(1.0, angle / 2.0)};
    case GateKind::RotX: return {c, cd(0.0, -s), cd(0.0, -s), c};
    case GateKind::RotY: return {c, -s, s, c};
    case GateKind::Phase: return {1.0, 0.0, 0.0, std::polar(1.0, angle)};
    case GateKind::CNOT: break;
  }
  throw CircuitError("CNOT has no single-qubit matrix");
}

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits_ < 1) throw CircuitError("a circuit needs at least one qubit");
}

Circuit& Circuit::add(const Gate& gate) {
  const int arity = gate.arity();
  for (int i = 0; i < arity; ++i) {
    const int q = gate.qubits[static_cast<std::size_t>(i)];
    if (q < 0 || q >= n_qubits_) {
      std::ostringstream msg;
      msg << gate_name(gate.kind) << " on qubit " << q << " outside a " << n_qubits_
          << "-qubit register";
      throw CircuitError(msg.str());
    }
  }
  if (arity == 2 && gate.qubits[0] == gate.qubits[1]) {
    throw CircuitError("two-qubit gate needs distinct qubits");
  }
  if (!std::isfinite(gate.angle)) throw CircuitError("gate angle must be finite");
  Gate g = gate;
  if (arity == 1) g.qubits[1] = -1;
  if (!has_angle(g.kind)) g.angle = 0.0;
  gates_.push_back(g);
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.n_qubits_ != n_qubits_) throw CircuitError("appending a circuit of another width");
  const std::size_t offset = gates_.size();
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
  for (std::size_t s : other.step_starts_) step_starts_.push_back(s + offset);
  return *this;
}

void Circuit::mark_step() { step_starts_.push_back(gates_.size()); }

Circuit Circuit::prefix(int steps) const {
  if (steps < 0 || steps > n_steps()) throw CircuitError("prefix step count out of range");
  const std::size_t end =
      steps == n_steps() ? gates_.size() : step_starts_[static_cast<std::size_t>(steps)];
  Circuit out(n_qubits_);
  out.gates_.assign(gates_.begin(), gates_.begin() + static_cast<std::ptrdiff_t>(end));
  out.step_starts_.assign(step_starts_.begin(), step_starts_.begin() + steps);
  return out;
}

Circuit Circuit::step(int j) const {
  if (j < 0 || j >= n_steps()) throw CircuitError("step index out of range");
  const std::size_t begin = step_starts_[static_cast<std::size_t>(j)];
  const std::size_t end =
      j + 1 == n_steps() ? gates_.size() : step_starts_[static_cast<std::size_t>(j + 1)];
  Circuit out(n_qubits_);
  out.gates_.assign(gates_.begin() + static_cast<std::ptrdiff_t>(begin),
                    gates_.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

GateCounts gate_counts(const Circuit& circuit) {
  GateCounts counts;
  for (const auto& g : circuit.gates()) {
    ++counts.by_kind[std::string(gate_name(g.kind))];
    if (g.arity() == 2) {
      ++counts.two_qubit;
    } else {
      ++counts.one_qubit;
    }
  }
  return counts;
}

void write_circuit(const Circuit& circuit, std::ostream& out) {
  out << "# n_qubits " << circuit.n_qubits() << '\n';
  std::size_t next_step = 0;
  const auto& starts = circuit.step_starts();
  const auto flush_marks = [&](std::size_t index) {
    while (next_step < starts.size() && starts[next_step] == index) {
      out << "# step " << next_step << '\n';
      ++next_step;
    }
  };
  char angle[40];
  for (std::size_t i = 0; i < circuit.gates().size(); ++i) {
    flush_marks(i);
    const Gate& g = circuit.gates()[i];
    out << gate_name(g.kind) << ' ' << g.qubits[0];
    if (g.arity() == 2) out << ' ' << g.qubits[1];
    if (has_angle(g.kind)) {
      std::snprintf(angle, sizeof(angle), "%.17g", g.angle);
      out << ' ' << angle;
    }
    out << '\n';
  }
  flush_marks(circuit.gates().size());
}

std::string dump_circuit(const Circuit& circuit) {
  std::ostringstream out;
  write_circuit(circuit, out);
  return out.str();
}

Circuit parse_circuit(std::istream& in) {
  std::vector<Gate> gates;
  std::vector<std::size_t> steps;
  int declared = -1;
  int widest = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head[0] == '#') {
      std::string key = head.size() > 1 ? head.substr(1) : "";
      if (key.empty()) ls >> key;
      if (key == "n_qubits") {
        ls >> declared;
      } else if (key == "step") {
        steps.push_back(gates.size());
      }
      continue;
    }
    Gate g;
    g.kind = parse_gate_name(head);
    if (!(ls >> g.qubits[0])) throw CircuitError("line " + std::to_string(lineno) + ": missing qubit");
    if (g.arity() == 2 && !(ls >> g.qubits[1])) {
      throw CircuitError("line " + std::to_string(lineno) + ": missing target qubit");
    }
    if (has_angle(g.kind) && !(ls >> g.angle)) {
      throw CircuitError("line " + std::to_string(lineno) + ": missing angle");
    }
    widest = std::max({widest, g.qubits[0] + 1, g.qubits[1] + 1});
    gates.push_back(g);
  }
  Circuit c(declared > 0 ? declared : std::max(widest, 1));
  std::size_t next = 0;
  for (std::size_t i = 0; i <= gates.size(); ++i) {
    while (next < steps.size() && steps[next] == i) {
      c.mark_step();
      ++next;
    }
    if (i < gates.size()) c.add(gates[i]);
  }
  return c;
}

Circuit parse_circuit(const std::string& text) {
  std::istringstream in(text);
  return parse_circuit(in);
}

}  // namespace hqoc
