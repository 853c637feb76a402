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

#include "hqoc/emulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "hqoc/error.hpp"

namespace hqoc {

namespace {

using Matrix2 = std::array<Complex, 4>;

void apply_1q(std::span<Complex> v, int bit, const Matrix2& u) {
  const std::size_t m = std::size_t{1} << bit;
  const std::size_t n = v.size();
  if (u[1] == 0.0 && u[2] == 0.0) {
    for (std::size_t base = 0; base < n; base += 2 * m) {
      for (std::size_t i = base; i < base + m; ++i) {
        v[i] *= u[0];
        v[i + m] *= u[3];
      }
    }
    return;
  }
  if (u[0] == 0.0 && u[3] == 0.0 && u[1] == 1.0 && u[2] == 1.0) {
    for (std::size_t base = 0; base < n; base += 2 * m)
      for (std::size_t i = base; i < base + m; ++i) std::swap(v[i], v[i + m]);
    return;
  }
  for (std::size_t base = 0; base < n; base += 2 * m) {
    for (std::size_t i = base; i < base + m; ++i) {
      const Complex a = v[i];
      const Complex b = v[i + m];
      v[i] = u[0] * a + u[1] * b;
      v[i + m] = u[2] * a + u[3] * b;
    }
  }
}

void apply_cnot(std::span<Complex> v, int control, int target) {
  const std::size_t mc = std::size_t{1} << control;
  const std::size_t mt = std::size_t{1} << target;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if ((i & mc) && !(i & mt)) std::swap(v[i], v[i | mt]);
  }
}

Matrix2 conjugate(const Matrix2& u) {
  return {std::conj(u[0]), std::conj(u[1]), std::conj(u[2]), std::conj(u[3])};
}

void check_register(int n_qubits, int limit, const char* backend) {
  if (n_qubits < 1) throw CircuitError("register needs at least one qubit");
  if (n_qubits > limit) {
    std::ostringstream msg;
    msg << backend << " backend supports at most " << limit << " qubits, requested " << n_qubits;
    throw ResourceError(msg.str());
  }
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(std::string(name) + " must be a probability in [0, 1]");
  }
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  check_register(n_qubits, kMaxStateVectorQubits, "statevector");
  amplitudes_.assign(std::size_t{1} << n_qubits, Complex{});
  amplitudes_[0] = 1.0;
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw CircuitError("basis index out of range");
  s.amplitudes_[0] = 0.0;
  s.amplitudes_[index] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
  const std::size_t n = amplitudes.size();
  if (n < 2 || (n & (n - 1)) != 0) throw ConfigError("amplitude count must be a power of two");
  int q = 0;
  while ((std::size_t{1} << q) < n) ++q;
  StateVector s(q);
  s.amplitudes_ = std::move(amplitudes);
  if (std::abs(s.norm() - 1.0) > 1e-9) throw ConfigError("state vector must be normalized");
  return s;
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amplitudes_.size());
  std::transform(amplitudes_.begin(), amplitudes_.end(), p.begin(),
                 [](const Complex& a) { return std::norm(a); });
  return p;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes_) s += std::norm(a);
  return std::sqrt(s);
}

Eigen::VectorXcd StateVector::to_vector() const {
  return Eigen::Map<const Eigen::VectorXcd>(amplitudes_.data(),
                                            static_cast<Eigen::Index>(amplitudes_.size()));
}

void StateVector::apply(const Gate& gate) {
  if (gate.qubits[0] >= n_qubits_ || (gate.arity() == 2 && gate.qubits[1] >= n_qubits_)) {
    throw CircuitError("gate qubit outside the state register");
  }
  if (gate.kind == GateKind::CNOT) {
    apply_cnot(amplitudes_, gate.qubits[0], gate.qubits[1]);
  } else {
    apply_1q(amplitudes_, gate.qubits[0], gate.matrix());
  }
}

void StateVector::apply(const Circuit& circuit) {
  if (circuit.n_qubits() != n_qubits_) throw CircuitError("circuit and state widths differ");
  for (const auto& g : circuit.gates()) apply(g);
}

void NoiseModel::validate() const {
  check_probability(p_bitflip_1q, "p_bitflip_1q");
  check_probability(p_bitflip_2q, "p_bitflip_2q");
  check_probability(p_depol_1q, "p_depol_1q");
  check_probability(p_depol_2q, "p_depol_2q");
}

NoiseModel NoiseModel::preset(const std::string& name) {
  // {bitflip 1q, bitflip 2q, depol 1q, depol 2q}
  if (name == "none") return {};
  if (name == "bf") return {1e-5, 1e-5, 0.0, 0.0};
  if (name == "sq-depol-1") return {0.0, 1e-5, 1e-5, 0.0};
  if (name == "sq-depol-2") return {0.0, 5e-5, 5e-5, 0.0};
  if (name == "mixed") return {5e-5, 5e-5, 5e-5, 0.0};
  throw ConfigError("unknown noise preset '" + name + "'");
}

std::vector<std::string> NoiseModel::preset_names() {
  return {"none", "bf", "sq-depol-1", "sq-depol-2", "mixed"};
}

NoiseModel noise_from_json(const Json& doc) {
  NoiseModel n;
  try {
    n.p_bitflip_1q = doc.value("p_bitflip_1q", 0.0);
    n.p_bitflip_2q = doc.value("p_bitflip_2q", 0.0);
    n.p_depol_1q = doc.value("p_depol_1q", 0.0);
    n.p_depol_2q = doc.value("p_depol_2q", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad noise model: ") + e.what());
  }
  n.validate();
  return n;
}

Json noise_to_json(const NoiseModel& noise) {
  Json doc;
  doc["p_bitflip_1q"] = noise.p_bitflip_1q;
  doc["p_bitflip_2q"] = noise.p_bitflip_2q;
  doc["p_depol_1q"] = noise.p_depol_1q;
  doc["p_depol_2q"] = noise.p_depol_2q;
  return doc;
}

DensityMatrix::DensityMatrix(int n_qubits) : n_qubits_(n_qubits) {
  check_register(n_qubits, kMaxDensityQubits, "density-matrix");
  dim_ = std::size_t{1} << n_qubits;
  data_.assign(dim_ * dim_, Complex{});
  data_[0] = 1.0;
}

DensityMatrix DensityMatrix::pure(const StateVector& state) {
  DensityMatrix rho(state.n_qubits());
  const auto a = state.amplitudes();
  for (std::size_t r = 0; r < rho.dim_; ++r)
    for (std::size_t c = 0; c < rho.dim_; ++c) rho.data_[r * rho.dim_ + c] = a[r] * std::conj(a[c]);
  return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  DensityMatrix rho(n_qubits);
  rho.data_[0] = 0.0;
  const double w = 1.0 / static_cast<double>(rho.dim_);
  for (std::size_t i = 0; i < rho.dim_; ++i) rho.data_[i * rho.dim_ + i] = w;
  return rho;
}

DensityMatrix DensityMatrix::from_matrix(const Eigen::MatrixXcd& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  if (m.rows() != m.cols() || n < 2 || (n & (n - 1)) != 0) {
    throw ConfigError("density matrix must be square with power-of-two dimension");
  }
  int q = 0;
  while ((std::size_t{1} << q) < n) ++q;
  DensityMatrix rho(q);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      rho.data_[r * n + c] = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  if (std::abs(rho.trace() - 1.0) > 1e-8) throw ConfigError("density matrix must have unit trace");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ConfigError("density matrix must be Hermitian");
  }
  return rho;
}

Complex DensityMatrix::trace() const {
  Complex t{};
  for (std::size_t i = 0; i < dim_; ++i) t += data_[i * dim_ + i];
  return t;
}

double DensityMatrix::purity() const {
  // Tr(rho^2) = sum |rho_rc|^2 for Hermitian rho.
  double s = 0.0;
  for (const auto& x : data_) s += std::norm(x);
  return s;
}

std::vector<double> DensityMatrix::diagonal() const {
  std::vector<double> d(dim_);
  for (std::size_t i = 0; i < dim_; ++i) d[i] = data_[i * dim_ + i].real();
  return d;
}

Eigen::MatrixXcd DensityMatrix::to_matrix() const {
  const auto n = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      m(r, c) = data_[static_cast<std::size_t>(r) * dim_ + static_cast<std::size_t>(c)];
  return m;
}

void DensityMatrix::apply_unitary(const Gate& gate) {
  if (gate.qubits[0] >= n_qubits_ || (gate.arity() == 2 && gate.qubits[1] >= n_qubits_)) {
    throw CircuitError("gate qubit outside the density-matrix register");
  }
  const int n = n_qubits_;
  if (gate.kind == GateKind::CNOT) {
    apply_cnot(data_, gate.qubits[0] + n, gate.qubits[1] + n);
    apply_cnot(data_, gate.qubits[0], gate.qubits[1]);
    return;
  }
  const Matrix2 u = gate.matrix();
  apply_1q(data_, gate.qubits[0] + n, u);
  apply_1q(data_, gate.qubits[0], conjugate(u));
}

void DensityMatrix::apply_bit_flip(int q, double p) {
  if (p == 0.0) return;
  const std::size_t mr = std::size_t{1} << (q + n_qubits_);
  const std::size_t mc = std::size_t{1} << q;
  const double keep = 1.0 - p;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if ((i & mr) || (i & mc)) continue;
    Complex& a = data_[i];
    Complex& b = data_[i | mc];
    Complex& c = data_[i | mr];
    Complex& e = data_[i | mr | mc];
    const Complex a0 = a, b0 = b, c0 = c, e0 = e;
    a = keep * a0 + p * e0;
    e = keep * e0 + p * a0;
    b = keep * b0 + p * c0;
    c = keep * c0 + p * b0;
  }
}

void DensityMatrix::apply_depolarizing(int q, double p) {
  if (p == 0.0) return;
  const std::size_t mr = std::size_t{1} << (q + n_qubits_);
  const std::size_t mc = std::size_t{1} << q;
  const double keep = 1.0 - p;
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if ((i & mr) || (i & mc)) continue;
    Complex& a = data_[i];
    Complex& b = data_[i | mc];
    Complex& c = data_[i | mr];
    Complex& e = data_[i | mr | mc];
    const Complex mixed = 0.5 * p * (a + e);
    a = keep * a + mixed;
    e = keep * e + mixed;
    b *= keep;
    c *= keep;
  }
}

void DensityMatrix::apply(const Gate& gate, const NoiseModel& noise) {
  apply_unitary(gate);
  const int arity = gate.arity();
  const double pf = noise.bitflip(arity);
  const double pd = noise.depolarizing(arity);
  for (int i = 0; i < arity; ++i) apply_bit_flip(gate.qubits[static_cast<std::size_t>(i)], pf);
  for (int i = 0; i < arity; ++i) apply_depolarizing(gate.qubits[static_cast<std::size_t>(i)], pd);
}

void DensityMatrix::apply(const Circuit& circuit, const NoiseModel& noise) {
  if (circuit.n_qubits() != n_qubits_) throw CircuitError("circuit and state widths differ");
  noise.validate();
  for (const auto& g : circuit.gates()) apply(g, noise);
}

StateVector apply_statevector(const Circuit& circuit, const StateVector& input) {
  StateVector out = input;
  out.apply(circuit);
  return out;
}

DensityMatrix apply_density(const Circuit& circuit, const DensityMatrix& input,
                            const NoiseModel& noise) {
  DensityMatrix out = input;
  out.apply(circuit, noise);
  return out;
}

std::string bitstring(std::uint64_t index, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q) {
    if (index >> q & 1U) s[static_cast<std::size_t>(n_qubits - 1 - q)] = '1';
  }
  return s;
}

Histogram sample_from_probabilities(std::span<const double> probabilities, int n_qubits,
                                    long long shots, std::uint64_t seed) {
  if (shots < 1) throw ConfigError("shots must be at least 1");
  if (probabilities.size() != std::size_t{1} << n_qubits) {
    throw ConfigError("probability vector does not match the register");
  }
  std::vector<double> cumulative(probabilities.size());
  double run = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    run += std::max(probabilities[i], 0.0);
    cumulative[i] = run;
  }
  if (!(run > 0.0)) throw NumericalError("probabilities sum to zero");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, run);
  std::vector<long long> tally(probabilities.size(), 0);
  for (long long s = 0; s < shots; ++s) {
    const double u = uniform(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    ++tally[static_cast<std::size_t>(it - cumulative.begin())];
  }
  Histogram h;
  for (std::size_t i = 0; i < tally.size(); ++i) {
    if (tally[i]) h[bitstring(i, n_qubits)] = tally[i];
  }
  return h;
}

Histogram sample_counts(const Circuit& circuit, const NoiseModel& noise, long long shots,
                        std::uint64_t seed) {
  if (noise.is_noiseless()) {
    const StateVector s = apply_statevector(circuit, StateVector(circuit.n_qubits()));
    return sample_from_probabilities(s.probabilities(), circuit.n_qubits(), shots, seed);
  }
  const DensityMatrix rho = apply_density(circuit, DensityMatrix(circuit.n_qubits()), noise);
  return sample_from_probabilities(rho.diagonal(), circuit.n_qubits(), shots, seed);
}

double total_variation(const Histogram& counts, std::span<const double> probabilities) {
  long long shots = 0;
  for (const auto& [_, c] : counts) shots += c;
  if (shots == 0) throw ConfigError("empty histogram");
  int n = 0;
  while ((std::size_t{1} << n) < probabilities.size()) ++n;
  double tv = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const auto it = counts.find(bitstring(i, n));
    const double f = it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(shots);
    tv += std::abs(f - probabilities[i]);
  }
  return 0.5 * tv;
}

double fidelity_to_pure(const StateVector& reference, const DensityMatrix& rho) {
  if (reference.dim() != rho.dim()) throw ConfigError("fidelity operands differ in dimension");
  const auto psi = reference.amplitudes();
  Complex f{};
  for (std::size_t r = 0; r < rho.dim(); ++r) {
    Complex row{};
    for (std::size_t c = 0; c < rho.dim(); ++c) row += rho(r, c) * psi[c];
    f += std::conj(psi[r]) * row;
  }
  return f.real();
}

void write_histogram_csv(const Histogram& counts, const std::filesystem::path& path,
                         const CsvProvenance& provenance) {
  CsvWriter csv(path, provenance, {"bitstring", "count"});
  for (const auto& [bits, c] : counts) {
    csv.cell(bits).cell(c);
    csv.end_row();
  }
}

}  // namespace hqoc
