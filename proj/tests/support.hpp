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

// Independent dense oracles and fixtures shared by the test binaries.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hqoc/circuit.hpp"
#include "hqoc/io.hpp"
#include "hqoc/model.hpp"

namespace hqoc::testing {

using Cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(HQOC_TEST_DATA_DIR) / name;
}

inline MolecularSystem cyan3() { return load_system(data_path("cyan3_like.json")); }
inline MolecularSystem two_level() { return load_system(data_path("two_level.json")); }
inline PulseParameters resonant_pulse() { return load_pulse(data_path("cyan3_resonant_pulse.json")); }

inline ControlProblem make_problem(const MolecularSystem& system, const PulseParameters& pulse,
                                   double dt, int target = 1, double weight = 1.0) {
  return ControlProblem{system, 0, target, pulse, PropagationGrid::for_duration(pulse.duration(), dt),
                        weight, PenaltyMode::functional};
}

/// 2x2 matrix of a one-qubit gate, written out from the textbook definitions.
inline Eigen::Matrix2cd one_qubit_matrix(GateKind kind, double angle) {
  const Cd i(0.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  switch (kind) {
    case GateKind::PauliX: m << 0, 1, 1, 0; break;
    case GateKind::Hadamard: m << r, r, r, -r; break;
    case GateKind::SGate: m << 1, 0, 0, i; break;
    case GateKind::SDagger: m << 1, 0, 0, -i; break;
    case GateKind::RotZ: m << std::exp(-i * angle / 2.0), 0, 0, std::exp(i * angle / 2.0); break;
    case GateKind::RotX:
      m << std::cos(angle / 2), -i * std::sin(angle / 2), -i * std::sin(angle / 2), std::cos(angle / 2);
      break;
    case GateKind::RotY:
      m << std::cos(angle / 2), -std::sin(angle / 2), std::sin(angle / 2), std::cos(angle / 2);
      break;
    case GateKind::Phase: m << 1, 0, 0, std::exp(i * angle); break;
    default: m.setIdentity();
  }
  return m;
}

/// Full 2^n x 2^n unitary of one gate; bit k of a basis index is qubit k.
inline Mat dense_gate(const Gate& g, int n) {
  const std::size_t dim = std::size_t{1} << n;
  Mat u = Mat::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  if (g.kind == GateKind::CNOT) {
    for (std::size_t col = 0; col < dim; ++col) {
      std::size_t row = col;
      if ((col >> g.qubits[0]) & 1U) row ^= std::size_t{1} << g.qubits[1];
      u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
    }
    return u;
  }
  const Eigen::Matrix2cd m = one_qubit_matrix(g.kind, g.angle);
  const int q = g.qubits[0];
  for (std::size_t col = 0; col < dim; ++col) {
    for (std::size_t row = 0; row < dim; ++row) {
      if ((row | (std::size_t{1} << q)) != (col | (std::size_t{1} << q))) continue;
      u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = m((row >> q) & 1U, (col >> q) & 1U);
    }
  }
  return u;
}

inline Mat dense_circuit(const Circuit& c) {
  const Eigen::Index dim = Eigen::Index{1} << c.n_qubits();
  Mat u = Mat::Identity(dim, dim);
  for (const Gate& g : c.gates()) u = dense_gate(g, c.n_qubits()) * u;
  return u;
}

/// Pauli operator on n qubits from a string read qubit 0 first, e.g. "XZY".
inline Mat pauli_string(const std::string& ops) {
  Eigen::Matrix2cd x, y, z, id;
  x << 0, 1, 1, 0;
  y << 0, Cd(0, -1), Cd(0, 1), 0;
  z << 1, 0, 0, -1;
  id.setIdentity();
  Mat out = Mat::Identity(1, 1);
  for (char c : ops) {
    const Eigen::Matrix2cd& m = c == 'X' ? x : c == 'Y' ? y : c == 'Z' ? z : id;
    // Higher qubits are more significant: new factor goes on the left.
    Mat next(out.rows() * 2, out.cols() * 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) next.block(a * out.rows(), b * out.cols(), out.rows(), out.cols()) = m(a, b) * out;
    out = next;
  }
  return out;
}

/// exp(-i t A) for Hermitian A via its eigendecomposition.
inline Mat expm_hermitian(const Mat& a, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  const Eigen::VectorXcd phases = (-Cd(0.0, 1.0) * t * es.eigenvalues().cast<Cd>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Distance between unitaries or states, minimized over a global phase.
inline double phase_distance(const Mat& a, const Mat& b) {
  const Cd overlap = (b.adjoint() * a).trace();
  const Cd phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Cd(1.0);
  return (a - phase * b).cwiseAbs().maxCoeff();
}

/// Random symmetric system with sorted energies in [0, 0.4] and dipoles in [-1, 1].
inline MolecularSystem random_system(int q, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> e(0.0, 0.4), d(-1.0, 1.0);
  Eigen::VectorXd energies(q);
  for (int k = 0; k < q; ++k) energies(k) = e(rng);
  std::sort(energies.data(), energies.data() + q);
  energies(0) = 0.0;
  std::array<Eigen::MatrixXd, kFieldComponents> dip;
  for (auto& m : dip) {
    m = Eigen::MatrixXd::Zero(q, q);
    for (int i = 0; i < q; ++i)
      for (int j = i; j < q; ++j) m(i, j) = m(j, i) = d(rng);
  }
  return MolecularSystem(energies, dip);
}

/// Pulse with random sine amplitudes up to `scale`.
inline PulseParameters random_pulse(double duration, int harmonics, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  PulseParameters p = PulseParameters::zeros(duration, harmonics, false);
  std::vector<double> a(static_cast<std::size_t>(p.n_coefficients()), 0.0);
  for (int i = 0; i < p.n_coefficients(); ++i)
    if (p.is_free(i)) a[static_cast<std::size_t>(i)] = u(rng);
  return p.with_amplitudes(a);
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("hqoc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace hqoc::testing
