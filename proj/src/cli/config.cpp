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

#include <system_error>

#include "hqoc/cli.hpp"
#include "hqoc/error.hpp"

namespace hqoc {

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ResourceError*>(&error)) return kExitResource;
  if (dynamic_cast<const NumericalError*>(&error)) return kExitNumerical;
  if (dynamic_cast<const DomainError*>(&error)) return kExitNumerical;
  if (dynamic_cast<const Error*>(&error)) return kExitConfig;
  if (dynamic_cast<const nlohmann::json::exception*>(&error)) return kExitConfig;
  return kExitFailure;
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& file) {
  const std::filesystem::path p(file);
  return p.is_absolute() ? p : base / p;
}

void inline_file(Json& parent, const std::string& key, const std::filesystem::path& base) {
  if (parent.contains(key) && parent.at(key).is_string()) {
    parent[key] = load_json(resolve(base, parent.at(key).get<std::string>()));
  }
}

NoiseModel noise_from_flag(const std::string& text, const std::filesystem::path& base) {
  const std::string prefix = "custom:";
  if (text.rfind(prefix, 0) == 0) {
    return noise_from_json(load_json(resolve(base, text.substr(prefix.size()))));
  }
  return NoiseModel::preset(text);
}

/// Reads a backend object without the circuit-only noise check.
BackendSpec lenient_backend(Json doc) {
  if (!doc.is_object()) throw ConfigError("backend must be an object");
  std::string method = "classical-exact";
  try {
    method = doc.value("method", method);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("backend: ") + e.what());
  }
  doc["method"] = "circuit";
  const double euler_dt = doc.value("euler_dt", 0.01);
  doc.erase("euler_dt");
  BackendSpec spec = backend_from_json(doc);
  spec.method = parse_backend(method).method;
  spec.euler_dt = euler_dt;
  if (spec.method == BackendMethod::ClassicalEuler && !(euler_dt > 0.0)) {
    throw ConfigError("Euler step must be positive");
  }
  return spec;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(Json doc, const std::filesystem::path& base,
                                             const std::filesystem::path& out) {
  if (doc.is_null()) doc = Json::object();
  if (!doc.is_object()) throw ConfigError("experiment configuration must be a JSON object");
  ExperimentConfig c;
  inline_file(doc, "system", base);
  inline_file(doc, "pulse", base);
  if (doc.contains("spectrum") && doc.at("spectrum").is_object()) {
    inline_file(doc["spectrum"], "pulse", base);
    inline_file(doc["spectrum"], "genomes", base);
  }
  if (doc.contains("optimize") && doc.at("optimize").is_object()) {
    inline_file(doc["optimize"], "ga", base);
  }
  BackendSpec backend;
  if (doc.contains("backend")) {
    const Json& b = doc.at("backend");
    if (b.is_string()) {
      backend = parse_backend(b.get<std::string>());
    } else {
      Json copy = b;
      if (copy.contains("noise") && copy.at("noise").is_string()) {
        copy["noise"] = noise_to_json(noise_from_flag(copy.at("noise").get<std::string>(), base));
      }
      backend = lenient_backend(copy);
    }
  }
  doc["backend"] = backend_to_json(backend);
  try {
    c.seed_ = doc.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("seed: ") + e.what());
  }
  doc["seed"] = c.seed_;
  c.doc_ = std::move(doc);
  c.hash_ = hex64(fnv1a64(c.doc_.dump()));
  c.out_ = out;
  std::error_code ec;
  std::filesystem::create_directories(c.out_, ec);
  if (ec || !std::filesystem::is_directory(c.out_)) {
    throw ConfigError("cannot create output directory " + c.out_.string());
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const GlobalOptions& options) {
  Json doc = Json::object();
  std::filesystem::path base = std::filesystem::current_path();
  if (options.config) {
    doc = load_json(*options.config);
    base = std::filesystem::absolute(*options.config).parent_path();
  }
  if (!doc.is_object()) throw ConfigError("experiment configuration must be a JSON object");
  if (options.seed) doc["seed"] = *options.seed;

  Json backend = doc.contains("backend") ? doc.at("backend") : Json::object();
  if (backend.is_string()) backend = backend_to_json(parse_backend(backend.get<std::string>()));
  if (options.backend) {
    const BackendSpec parsed = parse_backend(*options.backend);
    backend["method"] = to_string(parsed.method);
    backend["euler_dt"] = parsed.euler_dt;
    if (parsed.method == BackendMethod::Circuit && options.backend->find(':') != std::string::npos) {
      backend["variant"] = to_string(parsed.variant);
    }
  }
  if (options.variant) backend["variant"] = to_string(parse_variant(*options.variant));
  if (options.noise) backend["noise"] = noise_to_json(noise_from_flag(*options.noise, base));
  if (options.shots) backend["shots"] = *options.shots;
  if (options.readout) backend["readout"] = to_string(parse_readout(*options.readout));
  doc["backend"] = backend;
  return from_json(std::move(doc), base, options.out);
}

MolecularSystem ExperimentConfig::system() const {
  if (!doc_.contains("system")) throw ConfigError("experiment has no system");
  return system_from_json(doc_.at("system"));
}

PulseParameters ExperimentConfig::pulse() const {
  if (doc_.contains("pulse")) return pulse_from_json(doc_.at("pulse"));
  try {
    const double duration = doc_.value("duration", 250.0);
    const int m = doc_.contains("n_harmonics") ? doc_.at("n_harmonics").get<int>()
                                                : auto_harmonics(system(), duration);
    std::optional<double> clamp;
    if (doc_.contains("amplitude_clamp") && !doc_.at("amplitude_clamp").is_null()) {
      clamp = doc_.at("amplitude_clamp").get<double>();
    }
    return PulseParameters::zeros(duration, m, doc_.value("include_dc", false), clamp);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("pulse settings: ") + e.what());
  }
}

ControlProblem ExperimentConfig::problem() const {
  const PulseParameters p = pulse();
  try {
    ControlProblem problem{system(),
                           doc_.value("initial_state", 0),
                           doc_.value("target_state", 1),
                           p,
                           PropagationGrid::for_duration(p.duration(), doc_.value("dt", 1.0)),
                           doc_.value("penalty_weight", 1.0),
                           parse_penalty_mode(doc_.value("penalty_mode", std::string("functional")))};
    problem.validate();
    return problem;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("problem settings: ") + e.what());
  }
}

BackendSpec ExperimentConfig::backend() const {
  BackendSpec spec = lenient_backend(doc_.at("backend"));
  if (spec.method != BackendMethod::Circuit) {
    spec.noise = NoiseModel{};
    spec.readout = Readout::Exact;
  }
  return spec;
}

BackendSpec ExperimentConfig::circuit_backend() const {
  BackendSpec spec = lenient_backend(doc_.at("backend"));
  spec.method = BackendMethod::Circuit;
  return spec;
}

Json ExperimentConfig::section(const std::string& name) const {
  if (!doc_.contains(name)) return Json::object();
  const Json& s = doc_.at(name);
  if (!s.is_object()) throw ConfigError("section '" + name + "' must be an object");
  return s;
}

}  // namespace hqoc
