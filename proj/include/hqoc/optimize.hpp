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

// Pulse optimization: objective evaluation on the classical and circuit
// backends, a genetic algorithm with exploration/convergence phases,
// Nelder-Mead, and a BFGS ascent with central-difference gradients.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hqoc/emulator.hpp"
#include "hqoc/encoding.hpp"
#include "hqoc/error.hpp"
#include "hqoc/io.hpp"
#include "hqoc/model.hpp"

namespace hqoc {

using Rng = std::mt19937_64;

/// Mixes a base seed with stream coordinates (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// ---------------------------------------------------------------- backends

enum class BackendMethod { ClassicalEuler, ClassicalExact, Circuit };
enum class Readout { Exact, Sampled };

struct BackendSpec {
  BackendMethod method = BackendMethod::ClassicalExact;
  /// Fine step of the Euler integrator.
  double euler_dt = 0.01;
  CircuitVariant variant = CircuitVariant::SingleOccupancy;
  NoiseModel noise;
  Readout readout = Readout::Exact;
  long long shots = 2048;

  void validate() const;
  /// True when the value also depends on the evaluation seed.
  bool seed_dependent() const { return method == BackendMethod::Circuit && readout == Readout::Sampled; }
  /// Short identifier, e.g. "circuit:single-occ:mixed:exact".
  std::string describe() const;
};

/// classical-euler[:DT] | classical-exact | circuit[:VARIANT].
BackendSpec parse_backend(const std::string& text);
std::string to_string(BackendMethod method);
Readout parse_readout(const std::string& text);
std::string to_string(Readout readout);

BackendSpec backend_from_json(const Json& doc);
Json backend_to_json(const BackendSpec& backend);

// -------------------------------------------------------------- evaluation

struct Evaluation {
  double j = 0.0;
  double target_population = 0.0;
  double fluence = 0.0;
  /// Weight-free integral of |E|^2, for comparing penalty settings.
  double field_integral = 0.0;
  /// Probability outside the one-hot subspace (circuit backends only).
  double leakage = 0.0;
};

/// Thrown when a backend fails on a particular genome.
class EvaluationError : public NumericalError {
 public:
  EvaluationError(const std::string& what, long long genome_id)
      : NumericalError(what), genome_id_(genome_id) {}
  long long genome_id() const { return genome_id_; }

 private:
  long long genome_id_;
};

/// Propagates the pulse template filled with `amplitudes` from the initial
/// state and scores the target population at t = T. Deterministic in
/// (amplitudes, problem, backend, seed); the seed only feeds sampled readout.
Evaluation evaluate(std::span<const double> amplitudes, const ControlProblem& problem,
                    const BackendSpec& backend, std::uint64_t seed = 0, long long genome_id = -1);

/// Final-time populations of every state on the given backend.
DecodedPopulations final_populations(const ControlProblem& problem, const PulseParameters& pulse,
                                     const BackendSpec& backend, std::uint64_t seed = 0);

// ---------------------------------------------------------------- genomes

struct Genome {
  std::vector<double> amplitudes;
  std::optional<Evaluation> evaluation;

  bool evaluated() const { return evaluation.has_value(); }
  double fitness() const;
};

/// Indices of the m best genomes: higher J first, then lower fluence, then
/// lower index. StateError if any genome is unevaluated.
std::vector<std::size_t> select(std::span<const Genome> population, int m);

/// Each gene copied from a or b with probability 1/2.
std::vector<double> recombine(std::span<const double> a, std::span<const double> b, Rng& rng);

struct MutationSettings {
  double probability = 0.2;
  double mean = 0.0;
  double sigma = 0.0;
  std::optional<double> clamp;
};

/// Each gene, with the given probability, receives Normal(mean, sigma) and
/// is then clamped. Genes whose `frozen` entry is true are left untouched.
std::vector<double> mutate(std::span<const double> genes, const MutationSettings& settings,
                           Rng& rng, const std::vector<bool>& frozen = {});

// ------------------------------------------------------------------ runs

struct IterationRecord {
  int iteration = 0;
  std::string phase;
  Evaluation best;
  double mean_j = 0.0;
  double std_j = 0.0;
  long long evaluations = 0;
  std::vector<double> best_amplitudes;
};

struct OptimizationRun {
  std::string optimizer;
  std::string backend;
  std::uint64_t seed = 0;
  std::vector<IterationRecord> history;
  Genome best;
  long long evaluations = 0;
  std::vector<std::string> warnings;
};

/// iteration,phase,best_J,best_population,best_fluence,mean_J,std_J,evaluations
void write_history_csv(const OptimizationRun& run, const std::filesystem::path& path,
                       const CsvProvenance& provenance);
Json run_summary_json(const OptimizationRun& run);

// ------------------------------------------------------------------- GA

enum class GaMode { exploration, convergence };

struct GaPhase {
  GaMode mode = GaMode::exploration;
  int generations = 1;
  int population_size = 40;
  double mutation_sigma = 0.001;
};

struct GaConfig {
  std::vector<GaPhase> phases;
  int selected_count = 10;
  double recombination_probability = 1.0;
  /// false: only `mutated_individuals` children per generation are mutated.
  bool mutate_all = true;
  int mutated_individuals = 10;
  double mutation_probability = 0.2;
  double mutation_mean = 0.0;
  std::optional<double> amplitude_clamp = 0.005;
  /// Reaching this target population jumps straight to the last phase.
  std::optional<double> early_stop_population = 0.95;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
  int total_generations() const;
};

/// 40 individuals, 15 exploration (sigma 1e-3) + 15 convergence (sigma 1e-4).
GaConfig ga_two_phase_config(std::uint64_t seed);
/// Six alternating 10-generation phases (80 / 50 individuals) and a final
/// 40-generation convergence phase.
GaConfig ga_alternating_config(std::uint64_t seed);

GaConfig ga_config_from_json(const Json& doc);
Json ga_config_to_json(const GaConfig& config);

OptimizationRun ga_run(const ControlProblem& problem, const GaConfig& config,
                       const BackendSpec& backend);

// ----------------------------------------------------------- Nelder-Mead

struct NelderMeadOptions {
  int max_iterations = 100;
  /// Stop when the spread of vertex values and the simplex diameter both
  /// fall below these.
  double f_tolerance = 1e-12;
  double x_tolerance = 1e-12;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  long long evaluations = 0;
  bool converged = false;
  /// Best vertex after each iteration, with the running evaluation count.
  std::vector<std::vector<double>> best_per_iteration;
  std::vector<long long> evaluations_per_iteration;
};

/// Initial simplex from a guess: zero coordinates set to `zero_step`, the
/// others scaled by (1 + relative_step), one coordinate per vertex.
std::vector<std::vector<double>> initial_simplex(std::span<const double> guess,
                                                 double zero_step = 0.00025,
                                                 double relative_step = 0.05);

/// Minimizes f starting from the given simplex of n + 1 vertices.
NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<std::vector<double>> simplex,
                                      const NelderMeadOptions& options);

/// Maximizes J over the free amplitudes, starting from `guess`.
OptimizationRun nelder_mead_run(const ControlProblem& problem, const BackendSpec& backend,
                                const PulseParameters& guess, const NelderMeadOptions& options);

// ----------------------------------------------------------- quasi-Newton

struct QuasiNewtonOptions {
  int max_iterations = 100;
  /// Central-difference step (a.u.).
  double step = 1e-5;
  double gradient_tolerance = 1e-9;
  /// Largest coordinate change of a steepest-descent trial step.
  double initial_step = 1e-3;
  /// Armijo constant and backtracking factor of the line search.
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 40;
};

/// (f(x + h e_i) - f(x - h e_i)) / 2h for every i.
std::vector<double> central_gradient(const std::function<double(std::span<const double>)>& f,
                                     std::span<const double> x, double step);

struct QuasiNewtonResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  long long evaluations = 0;
  bool converged = false;
  std::vector<std::vector<double>> best_per_iteration;
  std::vector<long long> evaluations_per_iteration;
};

/// BFGS minimization with central-difference gradients and backtracking.
QuasiNewtonResult bfgs_minimize(const std::function<double(std::span<const double>)>& f,
                                std::vector<double> x0, const QuasiNewtonOptions& options);

OptimizationRun quasi_newton_run(const ControlProblem& problem, const BackendSpec& backend,
                                 const PulseParameters& guess, const QuasiNewtonOptions& options);

}  // namespace hqoc
