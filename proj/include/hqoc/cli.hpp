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

// Experiment configuration and the hqoc subcommands. Every command reads one
// JSON experiment file, writes CSV/JSON data files into the output
// directory and returns a process exit code.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hqoc/encoding.hpp"
#include "hqoc/io.hpp"
#include "hqoc/model.hpp"
#include "hqoc/optimize.hpp"

namespace hqoc {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitResource = 4,
};

/// Exit code for an exception escaping a command.
int exit_code_for(const std::exception& error);

/// Command-line overrides applied on top of the experiment file.
struct GlobalOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "hqoc-out";
  std::optional<std::string> backend;
  std::optional<std::string> variant;
  /// Preset name or custom:FILE.
  std::optional<std::string> noise;
  std::optional<long long> shots;
  std::optional<std::string> readout;
};

class ExperimentConfig {
 public:
  /// Loads the experiment file (if any), applies the overrides, resolves
  /// referenced files relative to the experiment file and creates `out`.
  static ExperimentConfig load(const GlobalOptions& options);
  /// From an in-memory document; relative paths resolve against `base`.
  static ExperimentConfig from_json(Json doc, const std::filesystem::path& base,
                                    const std::filesystem::path& out);

  /// Effective document with every referenced file inlined.
  const Json& doc() const { return doc_; }
  const std::filesystem::path& out_dir() const { return out_; }
  std::uint64_t seed() const { return seed_; }
  /// FNV-1a of the effective document.
  const std::string& hash() const { return hash_; }
  CsvProvenance provenance() const { return {hash_, seed_}; }

  MolecularSystem system() const;
  PulseParameters pulse() const;
  ControlProblem problem() const;
  /// Noise and readout settings only reach circuit methods.
  BackendSpec backend() const;
  /// The configured circuit settings with the method forced to circuit.
  BackendSpec circuit_backend() const;
  /// Section of the document for one command ({} when absent).
  Json section(const std::string& name) const;

 private:
  Json doc_;
  std::filesystem::path out_;
  std::uint64_t seed_ = 0;
  std::string hash_;
};

int cmd_propagate(const ExperimentConfig& config);
int cmd_optimize(const ExperimentConfig& config);
int cmd_noise_study(const ExperimentConfig& config);
int cmd_spectrum(const ExperimentConfig& config);
int cmd_bench(const ExperimentConfig& config);
int cmd_gate_count(const ExperimentConfig& config);

/// Least-squares slope of log(y) against log(x).
double fit_exponent(const std::vector<double>& x, const std::vector<double>& y);

/// Q-state system with every pair coupled, for gate-count scaling.
MolecularSystem dense_coupling_system(int n_states);

/// Parses the arguments, dispatches a subcommand and maps errors to exit
/// codes. Diagnostics go to stderr.
int run_cli(int argc, char** argv);

}  // namespace hqoc
