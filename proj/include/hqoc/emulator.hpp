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

// Statevector and density-matrix backends for the circuit IR.
//
// Both backends apply gates through kernels that touch only the one- or
// two-qubit subspace of each gate. The density matrix is stored row-major
// and treated as a 2n-qubit vector: column index bits are qubits 0..n-1 and
// row index bits are qubits n..2n-1, so U rho U^dagger is U on the row
// qubits followed by conj(U) on the column qubits.

#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hqoc/circuit.hpp"
#include "hqoc/io.hpp"

namespace hqoc {

using Complex = std::complex<double>;

inline constexpr int kMaxStateVectorQubits = 26;
inline constexpr int kMaxDensityQubits = 10;

class StateVector {
 public:
  /// |0...0>.
  explicit StateVector(int n_qubits);
  static StateVector basis(int n_qubits, std::uint64_t index);
  /// Normalized to 1e-9 or ConfigError.
  static StateVector from_amplitudes(std::vector<Complex> amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex amplitude(std::uint64_t index) const { return amplitudes_[index]; }
  double probability(std::uint64_t index) const { return std::norm(amplitudes_[index]); }
  std::vector<double> probabilities() const;
  double norm() const;
  Eigen::VectorXcd to_vector() const;

  void apply(const Gate& gate);
  void apply(const Circuit& circuit);

 private:
  int n_qubits_;
  std::vector<Complex> amplitudes_;
};

/// Per-gate noise: bit flip then depolarization on every acted qubit, with
/// the probability picked by gate arity.
struct NoiseModel {
  double p_bitflip_1q = 0.0;
  double p_bitflip_2q = 0.0;
  double p_depol_1q = 0.0;
  double p_depol_2q = 0.0;

  void validate() const;
  bool is_noiseless() const {
    return p_bitflip_1q == 0.0 && p_bitflip_2q == 0.0 && p_depol_1q == 0.0 && p_depol_2q == 0.0;
  }
  double bitflip(int arity) const { return arity == 2 ? p_bitflip_2q : p_bitflip_1q; }
  double depolarizing(int arity) const { return arity == 2 ? p_depol_2q : p_depol_1q; }

  /// none, bf, sq-depol-1, sq-depol-2, mixed.
  static NoiseModel preset(const std::string& name);
  static std::vector<std::string> preset_names();

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

NoiseModel noise_from_json(const Json& doc);
Json noise_to_json(const NoiseModel& noise);

class DensityMatrix {
 public:
  /// |0...0><0...0|.
  explicit DensityMatrix(int n_qubits);
  static DensityMatrix pure(const StateVector& state);
  static DensityMatrix maximally_mixed(int n_qubits);
  static DensityMatrix from_matrix(const Eigen::MatrixXcd& rho);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return dim_; }
  Complex operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }
  Complex trace() const;
  double purity() const;
  std::vector<double> diagonal() const;
  Eigen::MatrixXcd to_matrix() const;

  void apply_unitary(const Gate& gate);
  /// rho -> (1-p) rho + p X rho X on qubit q.
  void apply_bit_flip(int q, double p);
  /// rho -> (1-p) rho + p Tr_q(rho) (x) I/2 on qubit q.
  void apply_depolarizing(int q, double p);
  void apply(const Gate& gate, const NoiseModel& noise);
  void apply(const Circuit& circuit, const NoiseModel& noise);

 private:
  int n_qubits_;
  std::size_t dim_;
  std::vector<Complex> data_;
};

StateVector apply_statevector(const Circuit& circuit, const StateVector& input);
DensityMatrix apply_density(const Circuit& circuit, const DensityMatrix& input,
                            const NoiseModel& noise);

/// Bitstring -> count. Bitstrings are printed qubit n-1 first, so qubit 0
/// is the rightmost character ("001" has qubit 0 set).
using Histogram = std::map<std::string, long long>;

std::string bitstring(std::uint64_t index, int n_qubits);

/// Runs the circuit from |0...0> (statevector when noiseless, density
/// matrix otherwise) and samples `shots` outcomes with a seeded generator.
Histogram sample_counts(const Circuit& circuit, const NoiseModel& noise, long long shots,
                        std::uint64_t seed);
Histogram sample_from_probabilities(std::span<const double> probabilities, int n_qubits,
                                    long long shots, std::uint64_t seed);

/// Total-variation distance between empirical frequencies and a distribution.
double total_variation(const Histogram& counts, std::span<const double> probabilities);

/// <psi| rho |psi>.
double fidelity_to_pure(const StateVector& reference, const DensityMatrix& rho);

void write_histogram_csv(const Histogram& counts, const std::filesystem::path& path,
                         const CsvProvenance& provenance);

}  // namespace hqoc
