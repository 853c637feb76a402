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
#include "hqoc/error.hpp"
#include "hqoc/io.hpp"
#include "hqoc/model.hpp"
#include "support.hpp"

using namespace hqoc;
using namespace hqoc::testing;

namespace {

PulseParameters single_harmonic(double duration, int m, int component, int j, double a,
                                bool dc = false) {
  PulseParameters p = PulseParameters::zeros(duration, m, dc);
  std::vector<double> amps(static_cast<std::size_t>(p.n_coefficients()), 0.0);
  amps[static_cast<std::size_t>(PulseParameters::flat_index(m, component, j))] = a;
  return p.with_amplitudes(amps);
}

}  // namespace

TEST_CASE("field_at: zero pulse and endpoints") {
  const auto zero = PulseParameters::zeros(250.0, 15, false);
  for (double t : {0.0, 17.3, 125.0, 250.0}) CHECK(field_at(zero, t).norm() == 0.0);

  std::mt19937_64 rng(3);
  const auto p = random_pulse(250.0, 15, 0.004, rng);
  CHECK(field_at(p, 0.0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(field_at(p, 250.0).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("field_at: single harmonic at mid-pulse") {
  const auto p = single_harmonic(100.0, 1, 0, 1, 0.01);
  const FieldVector e = field_at(p, 50.0);
  CHECK(e(0) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(e(1) == 0.0);
  CHECK(e(2) == 0.0);
}

TEST_CASE("field_at: dc term and direct sum") {
  PulseParameters p = PulseParameters::zeros(80.0, 3, true);
  std::vector<double> a(static_cast<std::size_t>(p.n_coefficients()));
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = 0.001 * static_cast<double>(i + 1);
  p = p.with_amplitudes(a);
  const double t = 23.0;
  for (int c = 0; c < 3; ++c) {
    double expect = p.amplitude(c, 0);
    for (int j = 1; j <= 3; ++j) expect += p.amplitude(c, j) * std::sin(j * std::numbers::pi * t / 80.0);
    CHECK(field_at(p, t)(c) == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("field_at: outside the pulse is a domain error") {
  const auto p = PulseParameters::zeros(10.0, 2, false);
  CHECK_THROWS_AS(field_at(p, -0.5), DomainError);
  CHECK_THROWS_AS(field_at(p, 10.5), DomainError);
}

TEST_CASE("field_at: parity about the pulse midpoint") {
  const double T = 60.0;
  for (int j = 1; j <= 6; ++j) {
    const auto p = single_harmonic(T, 6, 1, j, 0.003);
    for (double s : {1.0, 7.5, 22.0}) {
      const double left = field_at(p, T / 2 - s)(1);
      const double right = field_at(p, T / 2 + s)(1);
      if (j % 2 == 0)
        CHECK(left == doctest::Approx(-right).epsilon(1e-12));
      else
        CHECK(left == doctest::Approx(right).epsilon(1e-12));
    }
  }
}

TEST_CASE("hamiltonian_at: zero field and two-level substitution") {
  const auto sys = cyan3();
  const Eigen::MatrixXd h0 = hamiltonian_at(sys, FieldVector::Zero());
  CHECK((h0 - Eigen::MatrixXd(sys.energies().asDiagonal())).norm() == 0.0);

  const auto two = two_level();
  const Eigen::MatrixXd h = hamiltonian_at(two, FieldVector(0.01, 0, 0));
  CHECK(h(0, 0) == 0.0);
  CHECK(h(0, 1) == doctest::Approx(-0.01));
  CHECK(h(1, 0) == doctest::Approx(-0.01));
  CHECK(h(1, 1) == doctest::Approx(0.125));
}

TEST_CASE("hamiltonian_at: element-wise oracle on the 3-level fixture") {
  const auto sys = cyan3();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.02, 0.02);
  for (int trial = 0; trial < 20; ++trial) {
    const FieldVector f(u(rng), u(rng), u(rng));
    const Eigen::MatrixXd h = hamiltonian_at(sys, f);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double v = i == j ? sys.energies()(i) : 0.0;
        for (int a = 0; a < 3; ++a) v -= f(a) * sys.dipole(a)(i, j);
        CHECK(h(i, j) == doctest::Approx(v).epsilon(1e-14));
      }
    }
    CHECK((h - h.transpose()).norm() == 0.0);
  }
}

TEST_CASE("hamiltonian_at: zero-field eigenvalues are the energies") {
  std::mt19937_64 rng(5);
  for (int q = 2; q <= 6; ++q) {
    const auto sys = random_system(q, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian_at(sys, FieldVector::Zero()));
    CHECK((es.eigenvalues() - sys.energies()).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("fluence: zero, dc and single harmonic") {
  const auto grid = PropagationGrid::for_duration(250.0, 1.0);
  CHECK(fluence(PulseParameters::zeros(250.0, 5, false), grid, 10.0) == 0.0);

  const double c = 0.002;
  const auto dc = single_harmonic(250.0, 5, 2, 0, c, true);
  CHECK(fluence(dc, grid, 3.0) == doctest::Approx(3.0 * c * c * 250.0).epsilon(1e-9));

  const double a = 0.004;
  const auto sine = single_harmonic(250.0, 5, 0, 3, a);
  CHECK(fluence(sine, grid, 10.0) == doctest::Approx(10.0 * a * a * 250.0 / 2.0).epsilon(1e-6));
}

TEST_CASE("fluence: sign flip invariance and weight vector") {
  std::mt19937_64 rng(8);
  const auto p = random_pulse(100.0, 7, 0.005, rng);
  std::vector<double> neg(p.amplitudes().begin(), p.amplitudes().end());
  for (double& v : neg) v = -v;
  const auto grid = PropagationGrid::for_duration(100.0, 0.5);
  CHECK(fluence(p, grid, 2.0) == fluence(p.with_amplitudes(neg), grid, 2.0));

  std::vector<double> w(static_cast<std::size_t>(grid.n_steps()) + 1, 2.0);
  CHECK(fluence(p, grid, std::span<const double>(w)) == doctest::Approx(fluence(p, grid, 2.0)));
  w.pop_back();
  CHECK_THROWS_AS(fluence(p, grid, std::span<const double>(w)), ConfigError);
}

TEST_CASE("objective_j: arithmetic and monotone in the penalty") {
  const auto grid = PropagationGrid::for_duration(250.0, 1.0);
  const auto zero = PulseParameters::zeros(250.0, 5, false);
  CHECK(objective_j(1.0, zero, grid, 1.0) == 1.0);
  CHECK(objective_j(0.0, zero, grid, 1.0) == 0.0);

  const auto p = single_harmonic(250.0, 5, 0, 1, 0.02);
  const double f = fluence(p, grid, 1.0);
  CHECK(objective_j(0.9, p, grid, 1.0) == doctest::Approx(0.9 - f));
  double last = 1.0;
  for (double w : {0.0, 0.5, 1.0, 2.0, 10.0}) {
    const double j = objective_j(0.9, p, grid, w);
    CHECK(j <= last);
    last = j;
  }
}

TEST_CASE("PropagationGrid covers the duration") {
  const auto g = PropagationGrid::for_duration(250.0, 1.0);
  CHECK(g.n_steps() == 250);
  CHECK(g.covers(250.0));
  CHECK(g.time(3) == 3.0);
  CHECK_THROWS_AS(PropagationGrid::for_duration(250.0, 0.3), ConfigError);
  CHECK_THROWS_AS(PropagationGrid(0.0, 5), ConfigError);
}

TEST_CASE("MolecularSystem and PulseParameters reject invalid input") {
  Eigen::VectorXd e(2);
  e << 0.0, 0.1;
  Eigen::MatrixXd asym(2, 2);
  asym << 0, 1, 0.5, 0;
  const Eigen::MatrixXd z = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(MolecularSystem(e, {asym, z, z}), ConfigError);
  Eigen::VectorXd unsorted(2);
  unsorted << 0.2, 0.1;
  CHECK_THROWS_AS(MolecularSystem(unsorted, {z, z, z}), ConfigError);

  CHECK_THROWS_AS(PulseParameters::zeros(-1.0, 3, false), ConfigError);
  CHECK_THROWS_AS(PulseParameters::zeros(10.0, 0, false), ConfigError);
  std::vector<double> big(12, 0.0);
  big[1] = 0.01;
  CHECK_THROWS_AS(PulseParameters(10.0, 3, false, big, 0.005), ConfigError);
}

TEST_CASE("system and pulse JSON round trip") {
  const auto sys = cyan3();
  const auto back = system_from_json(system_to_json(sys));
  CHECK(back.n_states() == 3);
  CHECK(back.labels() == sys.labels());
  for (int a = 0; a < 3; ++a) CHECK((back.dipole(a) - sys.dipole(a)).norm() == 0.0);

  const auto p = resonant_pulse();
  const auto q = pulse_from_json(pulse_to_json(p));
  CHECK(q.duration() == p.duration());
  CHECK(std::equal(q.amplitudes().begin(), q.amplitudes().end(), p.amplitudes().begin()));
}

TEST_CASE("resonant_guess picks the harmonic closest to the gap") {
  const auto sys = cyan3();
  const auto g = resonant_guess(sys, 0, 1, 250.0, 15, false, 0.01);
  const int j = static_cast<int>(std::lround(0.125 * 250.0 / std::numbers::pi));
  for (int c = 0; c < 3; ++c) CHECK(g.amplitude(c, j) == 0.01);
  CHECK(fluence(g, PropagationGrid::for_duration(250.0, 1.0), 1.0) ==
        doctest::Approx(3 * 0.01 * 0.01 * 250.0 / 2.0).epsilon(1e-6));
}
