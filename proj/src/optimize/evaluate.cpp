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
#include <string>
#include <vector>

#include "hqoc/optimize.hpp"
#include "hqoc/reference.hpp"

namespace hqoc {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ a) ^ b);
}

void BackendSpec::validate() const {
  if (method == BackendMethod::ClassicalEuler && !(euler_dt > 0.0)) {
    throw ConfigError("Euler step must be positive");
  }
  noise.validate();
  if (readout == Readout::Sampled && shots < 1) throw ConfigError("shots must be at least 1");
  if (method != BackendMethod::Circuit && !noise.is_noiseless()) {
    throw ConfigError("noise models apply only to the circuit backend");
  }
}

std::string to_string(BackendMethod method) {
  switch (method) {
    case BackendMethod::ClassicalEuler: return "classical-euler";
    case BackendMethod::ClassicalExact: return "classical-exact";
    case BackendMethod::Circuit: return "circuit";
  }
  return "classical-exact";
}

Readout parse_readout(const std::string& text) {
  if (text == "exact") return Readout::Exact;
  if (text == "sampled") return Readout::Sampled;
  throw ConfigError("unknown readout '" + text + "' (exact|sampled)");
}

std::string to_string(Readout readout) { return readout == Readout::Exact ? "exact" : "sampled"; }

namespace {

std::string noise_label(const NoiseModel& noise) {
  for (const auto& name : NoiseModel::preset_names())
    if (NoiseModel::preset(name) == noise) return name;
  return "custom";
}

}  // namespace

std::string BackendSpec::describe() const {
  switch (method) {
    case BackendMethod::ClassicalEuler: return "classical-euler:" + format_double(euler_dt);
    case BackendMethod::ClassicalExact: return "classical-exact";
    case BackendMethod::Circuit: {
      std::string out = "circuit:" + to_string(variant) + ":" + noise_label(noise) + ":" +
                        to_string(readout);
      if (readout == Readout::Sampled) out += ":" + std::to_string(shots);
      return out;
    }
  }
  return "classical-exact";
}

BackendSpec parse_backend(const std::string& text) {
  BackendSpec spec;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "classical-euler" || head == "euler") {
    spec.method = BackendMethod::ClassicalEuler;
    if (!tail.empty()) {
      try {
        std::size_t used = 0;
        spec.euler_dt = std::stod(tail, &used);
        if (used != tail.size()) throw ConfigError("");
      } catch (const std::exception&) {
        throw ConfigError("bad Euler step in backend '" + text + "'");
      }
    }
  } else if (head == "classical-exact" || head == "exact") {
    spec.method = BackendMethod::ClassicalExact;
    if (!tail.empty()) throw ConfigError("classical-exact takes no options");
  } else if (head == "circuit") {
    spec.method = BackendMethod::Circuit;
    if (!tail.empty()) spec.variant = parse_variant(tail);
  } else {
    throw ConfigError("unknown backend '" + text +
                      "' (classical-euler[:DT]|classical-exact|circuit[:VARIANT])");
  }
  spec.validate();
  return spec;
}

BackendSpec backend_from_json(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("backend must be an object");
  BackendSpec spec;
  try {
    spec = parse_backend(doc.value("method", std::string("classical-exact")));
    spec.euler_dt = doc.value("euler_dt", spec.euler_dt);
    if (doc.contains("variant")) spec.variant = parse_variant(doc.at("variant").get<std::string>());
    if (doc.contains("noise")) {
      const Json& n = doc.at("noise");
      spec.noise = n.is_string() ? NoiseModel::preset(n.get<std::string>()) : noise_from_json(n);
    }
    if (doc.contains("readout")) spec.readout = parse_readout(doc.at("readout").get<std::string>());
    spec.shots = doc.value("shots", spec.shots);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("backend: ") + e.what());
  }
  spec.validate();
  return spec;
}

Json backend_to_json(const BackendSpec& backend) {
  Json doc;
  doc["method"] = to_string(backend.method);
  doc["euler_dt"] = backend.euler_dt;
  doc["variant"] = to_string(backend.variant);
  doc["noise"] = noise_to_json(backend.noise);
  doc["readout"] = to_string(backend.readout);
  doc["shots"] = backend.shots;
  return doc;
}

namespace {

DecodedPopulations classical_final(const WavefunctionTrajectory& traj) {
  DecodedPopulations d;
  d.populations = traj.final_state().cwiseAbs2();
  return d;
}

}  // namespace

DecodedPopulations final_populations(const ControlProblem& problem, const PulseParameters& pulse,
                                     const BackendSpec& backend, std::uint64_t seed) {
  switch (backend.method) {
    case BackendMethod::ClassicalEuler:
      return classical_final(propagate_euler(problem, pulse, backend.euler_dt));
    case BackendMethod::ClassicalExact:
      return classical_final(propagate_exact(problem, pulse, problem.grid));
    case BackendMethod::Circuit: break;
  }
  const int n = problem.system.n_states();
  const Circuit circuit = evolution_circuit(problem, pulse, problem.grid, backend.variant);
  std::vector<double> probabilities;
  if (backend.noise.is_noiseless()) {
    StateVector psi(n);
    psi.apply(circuit);
    if (backend.readout == Readout::Exact) return decode_populations(psi, n);
    probabilities = psi.probabilities();
  } else {
    DensityMatrix rho(n);
    rho.apply(circuit, backend.noise);
    if (backend.readout == Readout::Exact) return decode_populations(rho, n);
    probabilities = rho.diagonal();
  }
  return decode_populations(sample_from_probabilities(probabilities, n, backend.shots, seed), n);
}

Evaluation evaluate(std::span<const double> amplitudes, const ControlProblem& problem,
                    const BackendSpec& backend, std::uint64_t seed, long long genome_id) {
  if (static_cast<int>(amplitudes.size()) != problem.pulse_template.n_coefficients()) {
    throw ConfigError("genome has " + std::to_string(amplitudes.size()) +
                      " amplitudes, the pulse template needs " +
                      std::to_string(problem.pulse_template.n_coefficients()));
  }
  const PulseParameters pulse = problem.pulse_template.with_amplitudes(
      std::vector<double>(amplitudes.begin(), amplitudes.end()));
  DecodedPopulations d;
  try {
    d = final_populations(problem, pulse, backend, seed);
  } catch (const NumericalError& e) {
    throw EvaluationError("genome " + std::to_string(genome_id) + ": " + e.what(), genome_id);
  }
  Evaluation ev;
  ev.target_population = d.populations(problem.target_state_index);
  if (!std::isfinite(ev.target_population)) {
    throw EvaluationError("genome " + std::to_string(genome_id) + ": non-finite population",
                          genome_id);
  }
  ev.leakage = d.leakage;
  ev.fluence = fluence(pulse, problem.grid, problem.effective_weight());
  ev.field_integral = fluence(pulse, problem.grid, 1.0);
  ev.j = ev.target_population - ev.fluence;
  return ev;
}

}  // namespace hqoc
