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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hqoc/circuit.hpp"
#include "hqoc/emulator.hpp"
#include "hqoc/encoding.hpp"
#include "hqoc/error.hpp"
#include "support.hpp"

using namespace hqoc;
using namespace hqoc::testing;

namespace {

Circuit random_circuit(int n, int n_gates, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kind(0, 8), qubit(0, n - 1);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  Circuit c(n);
  while (static_cast<int>(c.size()) < n_gates) {
    const auto k = static_cast<GateKind>(kind(rng));
    const int a = qubit(rng);
    if (k == GateKind::CNOT) {
      if (n < 2) continue;
      int b = qubit(rng);
      while (b == a) b = qubit(rng);
      c.add(Gate::cnot(a, b));
    } else {
      c.add(Gate{k, {a, -1}, has_angle(k) ? angle(rng) : 0.0});
    }
  }
  return c;
}

Eigen::VectorXcd as_vector(const StateVector& s) {
  return Eigen::Map<const Eigen::VectorXcd>(s.amplitudes().data(), static_cast<Eigen::Index>(s.dim()));
}

Eigen::VectorXcd random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(Eigen::Index{1} << n);
  for (auto& x : v) x = Cd(g(rng), g(rng));
  return v.normalized();
}

StateVector to_state(const Eigen::VectorXcd& v) {
  return StateVector::from_amplitudes(std::vector<Cd>(v.data(), v.data() + v.size()));
}

}  // namespace

TEST_CASE("X on qubit 0 sets the least significant bit") {
  Circuit c(3);
  c.add(Gate::x(0));
  const StateVector out = apply_statevector(c, StateVector(3));
  CHECK(out.probability(1) == 1.0);
  CHECK(bitstring(1, 3) == "001");
}

TEST_CASE("empty circuit is the identity") {
  std::mt19937_64 rng(1);
  const auto v = random_state(4, rng);
  const StateVector out = apply_statevector(Circuit(4), to_state(v));
  CHECK((as_vector(out) - v).norm() == 0.0);
  const GateCounts g = gate_counts(Circuit(4));
  CHECK(g.total() == 0);
  CHECK(g.by_kind.empty());
}

TEST_CASE("statevector kernels match the dense gate product") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + trial % 5;
    const Circuit c = random_circuit(n, trial < 5 ? 50 : 200, rng);
    const auto v = random_state(n, rng);
    const StateVector out = apply_statevector(c, to_state(v));
    CHECK((as_vector(out) - dense_circuit(c) * v).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(out.norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("noiseless density evolution equals the pure outer product") {
  std::mt19937_64 rng(9);
  for (int n = 1; n <= 5; ++n) {
    const Circuit c = random_circuit(n, 200, rng);
    const auto v = random_state(n, rng);
    const DensityMatrix rho = apply_density(c, DensityMatrix::pure(to_state(v)), NoiseModel{});
    const Eigen::VectorXcd psi = dense_circuit(c) * v;
    CHECK((rho.to_matrix() - psi * psi.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("bit flip with certainty undoes X") {
  Circuit c(1);
  c.add(Gate::x(0));
  NoiseModel noise;
  noise.p_bitflip_1q = 1.0;
  const DensityMatrix rho = apply_density(c, DensityMatrix(1), noise);
  CHECK(std::abs(rho(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(rho(1, 1)) < 1e-15);
}

TEST_CASE("depolarizing purity follows the single-qubit closed form") {
  NoiseModel noise;
  noise.p_depol_1q = 0.05;
  DensityMatrix rho(1);
  double last = rho.purity();
  for (int k = 1; k <= 20; ++k) {
    Circuit c(1);
    c.add(Gate::h(0));
    rho.apply(c, noise);
    // Bloch vector length shrinks by (1 - p) per gate.
    const double r = std::pow(0.95, k);
    CHECK(rho.purity() == doctest::Approx((1.0 + r * r) / 2.0).epsilon(1e-12));
    CHECK(rho.purity() < last);
    CHECK(rho.purity() > 0.5);
    last = rho.purity();
  }
}

TEST_CASE("channels preserve trace, Hermiticity and positivity") {
  std::mt19937_64 rng(4);
  const int n = 3;
  DensityMatrix rho = DensityMatrix::pure(to_state(random_state(n, rng)));
  std::uniform_int_distribution<int> q(0, n - 1);
  std::uniform_real_distribution<double> p(0.0, 0.3);
  for (int k = 0; k < 5000; ++k) {
    rho.apply_bit_flip(q(rng), p(rng));
    rho.apply_depolarizing(q(rng), p(rng));
  }
  CHECK(std::abs(rho.trace() - 1.0) < 1e-8);
  const Eigen::MatrixXcd m = rho.to_matrix();
  CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  CHECK(es.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("two-qubit gate noise acts on both qubits") {
  Circuit c(2);
  c.add(Gate::cnot(0, 1));
  NoiseModel noise;
  noise.p_bitflip_2q = 1.0;
  const DensityMatrix rho = apply_density(c, DensityMatrix(2), noise);
  CHECK(std::abs(rho(3, 3) - 1.0) < 1e-15);
}

TEST_CASE("fidelity: pure, maximally mixed, orthogonal") {
  std::mt19937_64 rng(2);
  const auto v = random_state(3, rng);
  const StateVector psi = to_state(v);
  CHECK(fidelity_to_pure(psi, DensityMatrix::pure(psi)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity_to_pure(psi, DensityMatrix::maximally_mixed(3)) == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
  CHECK(fidelity_to_pure(StateVector::basis(3, 2), DensityMatrix::pure(StateVector::basis(3, 5))) == 0.0);
}

TEST_CASE("fidelity is non-increasing along a noisy identity circuit") {
  const auto noise = NoiseModel::preset("mixed");
  NoiseModel strong = noise;
  strong.p_depol_1q = 0.01;
  strong.p_bitflip_1q = 0.01;
  std::mt19937_64 rng(6);
  const StateVector psi = to_state(random_state(2, rng));
  DensityMatrix rho = DensityMatrix::pure(psi);
  double last = 1.0;
  for (int k = 0; k < 40; ++k) {
    Circuit c(2);
    c.add(Gate::x(k % 2)).add(Gate::x(k % 2));
    rho.apply(c, strong);
    const double f = fidelity_to_pure(psi, rho);
    CHECK(f <= last + 1e-9);
    last = f;
  }
  CHECK(last < 0.99);
}

TEST_CASE("sampling: deterministic preparations and reproducibility") {
  Circuit c(3);
  c.add(Gate::x(0));
  const Histogram h = sample_counts(c, NoiseModel{}, 2048, 1);
  REQUIRE(h.size() == 1);
  CHECK(h.at("001") == 2048);
  CHECK(sample_counts(c, NoiseModel::preset("mixed"), 2048, 5) == sample_counts(c, NoiseModel::preset("mixed"), 2048, 5));
  CHECK_THROWS_AS(sample_counts(c, NoiseModel{}, 0, 1), ConfigError);
}

TEST_CASE("sampling a uniform qubit stays within binomial bounds") {
  Circuit c(1);
  c.add(Gate::h(0));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Histogram h = sample_counts(c, NoiseModel{}, 2048, seed);
    const double sigma = std::sqrt(2048 * 0.25);
    CHECK(std::abs(static_cast<double>(h.at("0")) - 1024.0) < 5 * sigma);
    CHECK(h.at("0") + h.at("1") == 2048);
  }
}

TEST_CASE("sampled histogram converges to the density diagonal under noise") {
  const auto sys = cyan3();
  const auto pulse = resonant_pulse();
  const auto problem = make_problem(sys, pulse, 1.0);
  const Circuit c = evolution_circuit(problem, pulse, problem.grid, CircuitVariant::SingleOccupancy).prefix(10);
  const auto noise = NoiseModel::preset("mixed");
  const DensityMatrix rho = apply_density(c, DensityMatrix(3), noise);
  const auto diag = rho.diagonal();
  CHECK(total_variation(sample_counts(c, noise, 2048, 3), diag) < 0.05);
}

TEST_CASE("gate validation and resource bounds") {
  Circuit c(2);
  CHECK_THROWS_AS(c.add(Gate::x(2)), CircuitError);
  CHECK_THROWS_AS(c.add(Gate::cnot(1, 1)), CircuitError);
  CHECK_THROWS_AS(c.add(Gate::rz(0, std::nan(""))), CircuitError);
  CHECK_THROWS_AS(DensityMatrix(kMaxDensityQubits + 1), ResourceError);
  CHECK_THROWS_AS(apply_statevector(Circuit(3), StateVector(2)), CircuitError);
}

TEST_CASE("circuit dump round trip keeps every angle") {
  std::mt19937_64 rng(12);
  const Circuit c = random_circuit(4, 80, rng);
  const Circuit back = parse_circuit(dump_circuit(c));
  REQUIRE(back.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(back.gates()[i].kind == c.gates()[i].kind);
    CHECK(back.gates()[i].qubits == c.gates()[i].qubits);
    CHECK(back.gates()[i].angle == c.gates()[i].angle);
  }
}

TEST_CASE("gate counts tally kinds and arity") {
  Circuit c(3);
  c.add(Gate::h(0)).add(Gate::cnot(0, 1)).add(Gate::cnot(1, 2)).add(Gate::rz(2, 0.3)).add(Gate::h(0));
  const GateCounts g = gate_counts(c);
  CHECK(g.one_qubit == 3);
  CHECK(g.two_qubit == 2);
  CHECK(g.by_kind.at("H") == 2);
  CHECK(g.by_kind.at("CNOT") == 2);
}

TEST_CASE("step marks support prefixes") {
  Circuit c(2);
  c.add(Gate::x(0));
  c.mark_step();
  c.add(Gate::h(1));
  c.mark_step();
  c.add(Gate::cnot(1, 0)).add(Gate::s(0));
  CHECK(c.n_steps() == 2);
  CHECK(c.prefix(0).size() == 1);
  CHECK(c.prefix(1).size() == 2);
  CHECK(c.prefix(2).size() == 4);
  CHECK(c.step(1).size() == 2);
}

TEST_CASE("noise presets and validation") {
  CHECK(NoiseModel::preset("none").is_noiseless());
  const auto bf = NoiseModel::preset("bf");
  CHECK(bf.p_bitflip_1q == 1e-5);
  CHECK(bf.p_bitflip_2q == 1e-5);
  CHECK(bf.p_depol_1q == 0.0);
  const auto sq2 = NoiseModel::preset("sq-depol-2");
  CHECK(sq2.p_bitflip_2q == 5e-5);
  CHECK(sq2.p_depol_1q == 5e-5);
  CHECK_THROWS_AS(NoiseModel::preset("thermal"), ConfigError);
  NoiseModel bad;
  bad.p_depol_2q = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK(noise_from_json(noise_to_json(sq2)) == sq2);
}
