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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "hqoc/optimize.hpp"

namespace hqoc {

double Genome::fitness() const {
  if (!evaluation) throw StateError("genome has not been evaluated");
  return evaluation->j;
}

std::vector<std::size_t> select(std::span<const Genome> population, int m) {
  if (m < 1 || static_cast<std::size_t>(m) > population.size()) {
    throw ConfigError("selection size must be between 1 and the population size");
  }
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (!population[i].evaluated()) {
      throw StateError("individual " + std::to_string(i) + " has not been evaluated");
    }
  }
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Evaluation& ea = *population[a].evaluation;
    const Evaluation& eb = *population[b].evaluation;
    if (ea.j != eb.j) return ea.j > eb.j;
    if (ea.fluence != eb.fluence) return ea.fluence < eb.fluence;
    return a < b;
  });
  order.resize(static_cast<std::size_t>(m));
  return order;
}

std::vector<double> recombine(std::span<const double> a, std::span<const double> b, Rng& rng) {
  if (a.size() != b.size()) throw ConfigError("parents differ in length");
  std::vector<double> child(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) child[i] = (rng() >> 63) != 0 ? a[i] : b[i];
  return child;
}

std::vector<double> mutate(std::span<const double> genes, const MutationSettings& settings,
                           Rng& rng, const std::vector<bool>& frozen) {
  if (!(settings.probability >= 0.0 && settings.probability <= 1.0)) {
    throw ConfigError("mutation probability must lie in [0, 1]");
  }
  if (!(settings.sigma >= 0.0)) throw ConfigError("mutation sigma must be non-negative");
  if (!frozen.empty() && frozen.size() != genes.size()) {
    throw ConfigError("frozen mask does not match the genome");
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::normal_distribution<double> kick(settings.mean, settings.sigma);
  std::vector<double> out(genes.begin(), genes.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!frozen.empty() && frozen[i]) continue;
    if (coin(rng) < settings.probability) {
      out[i] += settings.sigma > 0.0 ? kick(rng) : settings.mean;
    }
    if (settings.clamp) out[i] = std::clamp(out[i], -*settings.clamp, *settings.clamp);
  }
  return out;
}

namespace {

std::string mode_name(GaMode mode) {
  return mode == GaMode::exploration ? "exploration" : "convergence";
}

GaMode parse_mode(const std::string& text) {
  if (text == "exploration") return GaMode::exploration;
  if (text == "convergence") return GaMode::convergence;
  throw ConfigError("unknown GA phase mode '" + text + "' (exploration|convergence)");
}

}  // namespace

void GaConfig::validate() const {
  if (phases.empty()) throw ConfigError("GA needs at least one phase");
  if (selected_count < 1) throw ConfigError("GA selected_count must be at least 1");
  for (const auto& p : phases) {
    if (p.generations < 1) throw ConfigError("every GA phase needs at least one generation");
    if (p.population_size < selected_count) {
      throw ConfigError("GA population_size must be at least selected_count");
    }
    if (!(p.mutation_sigma >= 0.0) || !std::isfinite(p.mutation_sigma)) {
      throw ConfigError("GA mutation_sigma must be finite and non-negative");
    }
  }
  const auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(recombination_probability) || !unit(mutation_probability)) {
    throw ConfigError("GA probabilities must lie in [0, 1]");
  }
  if (!std::isfinite(mutation_mean)) throw ConfigError("GA mutation_mean must be finite");
  if (mutated_individuals < 0) throw ConfigError("GA mutated_individuals must be non-negative");
  if (amplitude_clamp && !(*amplitude_clamp > 0.0)) {
    throw ConfigError("GA amplitude_clamp must be positive");
  }
  if (threads < 1) throw ConfigError("GA threads must be at least 1");
}

int GaConfig::total_generations() const {
  int total = 0;
  for (const auto& p : phases) total += p.generations;
  return total;
}

GaConfig ga_two_phase_config(std::uint64_t seed) {
  GaConfig c;
  c.phases = {{GaMode::exploration, 15, 40, 0.001}, {GaMode::convergence, 15, 40, 0.0001}};
  c.seed = seed;
  return c;
}

GaConfig ga_alternating_config(std::uint64_t seed) {
  GaConfig c;
  for (int i = 0; i < 3; ++i) {
    c.phases.push_back({GaMode::exploration, 10, 80, 0.001});
    c.phases.push_back({GaMode::convergence, 10, 50, 0.0001});
  }
  c.phases.push_back({GaMode::convergence, 40, 50, 0.0001});
  c.seed = seed;
  return c;
}

GaConfig ga_config_from_json(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("GA config must be an object");
  GaConfig c;
  try {
    if (doc.contains("phases")) {
      for (const auto& p : doc.at("phases")) {
        GaPhase phase;
        phase.mode = parse_mode(p.value("mode", std::string("exploration")));
        phase.generations = p.at("generations").get<int>();
        phase.population_size = p.at("population_size").get<int>();
        phase.mutation_sigma = p.at("mutation_sigma").get<double>();
        c.phases.push_back(phase);
      }
    } else {
      c.phases = ga_two_phase_config(0).phases;
    }
    c.selected_count = doc.value("selected_count", c.selected_count);
    c.recombination_probability = doc.value("recombination_probability", c.recombination_probability);
    c.mutate_all = doc.value("mutate_all", c.mutate_all);
    c.mutated_individuals = doc.value("mutated_individuals", c.mutated_individuals);
    c.mutation_probability = doc.value("mutation_probability", c.mutation_probability);
    c.mutation_mean = doc.value("mutation_mean", c.mutation_mean);
    if (doc.contains("amplitude_clamp")) {
      const Json& v = doc.at("amplitude_clamp");
      c.amplitude_clamp = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
    }
    if (doc.contains("early_stop_population")) {
      const Json& v = doc.at("early_stop_population");
      c.early_stop_population = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
    }
    c.seed = doc.value("seed", c.seed);
    c.threads = doc.value("threads", c.threads);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("GA config: ") + e.what());
  }
  c.validate();
  return c;
}

Json ga_config_to_json(const GaConfig& config) {
  Json doc;
  Json phases = Json::array();
  for (const auto& p : config.phases) {
    phases.push_back({{"mode", mode_name(p.mode)},
                      {"generations", p.generations},
                      {"population_size", p.population_size},
                      {"mutation_sigma", p.mutation_sigma}});
  }
  doc["phases"] = phases;
  doc["selected_count"] = config.selected_count;
  doc["recombination_probability"] = config.recombination_probability;
  doc["mutate_all"] = config.mutate_all;
  doc["mutated_individuals"] = config.mutated_individuals;
  doc["mutation_probability"] = config.mutation_probability;
  doc["mutation_mean"] = config.mutation_mean;
  doc["amplitude_clamp"] = config.amplitude_clamp ? Json(*config.amplitude_clamp) : Json(nullptr);
  doc["early_stop_population"] =
      config.early_stop_population ? Json(*config.early_stop_population) : Json(nullptr);
  doc["seed"] = config.seed;
  doc["threads"] = config.threads;
  return doc;
}

namespace {

constexpr std::uint64_t kInitStream = 0x1d1;
constexpr std::uint64_t kBreedStream = 0xb7ee;

void evaluate_all(std::vector<Genome>& population, const ControlProblem& problem,
                  const BackendSpec& backend, std::uint64_t seed, int generation, int threads,
                  long long& evaluations) {
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < population.size(); ++i)
    if (!population[i].evaluated()) todo.push_back(i);
  std::vector<std::exception_ptr> errors(todo.size());
  auto work = [&](std::size_t k) {
    const std::size_t i = todo[k];
    try {
      population[i].evaluation =
          evaluate(population[i].amplitudes, problem, backend,
                   derive_seed(seed, static_cast<std::uint64_t>(generation) + 1, i),
                   static_cast<long long>(i));
    } catch (...) {
      errors[k] = std::current_exception();
    }
  };
  const int n_threads = std::min<int>(threads, static_cast<int>(todo.size()));
  if (n_threads <= 1) {
    for (std::size_t k = 0; k < todo.size(); ++k) work(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < todo.size(); k = next++) work(k);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (std::size_t k = 0; k < todo.size(); ++k) {
    if (!errors[k]) continue;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const EvaluationError& e) {
      throw EvaluationError("generation " + std::to_string(generation) + ", " + e.what(),
                            e.genome_id());
    }
  }
  evaluations += static_cast<long long>(todo.size());
}

}  // namespace

OptimizationRun ga_run(const ControlProblem& problem, const GaConfig& config,
                       const BackendSpec& backend) {
  problem.validate();
  config.validate();
  backend.validate();
  const PulseParameters& tmpl = problem.pulse_template;
  const int n_genes = tmpl.n_coefficients();
  std::vector<bool> frozen(static_cast<std::size_t>(n_genes));
  for (int i = 0; i < n_genes; ++i) frozen[static_cast<std::size_t>(i)] = !tmpl.is_free(i);
  std::optional<double> clamp = config.amplitude_clamp;
  if (tmpl.amplitude_clamp()) {
    clamp = clamp ? std::min(*clamp, *tmpl.amplitude_clamp()) : tmpl.amplitude_clamp();
  }

  OptimizationRun run;
  run.optimizer = "ga";
  run.backend = backend.describe();
  run.seed = config.seed;

  // Individual 0 is the template itself; the rest are drawn uniformly
  // inside the clamp (or around the template when unclamped).
  std::vector<Genome> population(static_cast<std::size_t>(config.phases.front().population_size));
  {
    Rng rng(derive_seed(config.seed, kInitStream));
    std::vector<double> base(tmpl.amplitudes().begin(), tmpl.amplitudes().end());
    if (clamp)
      for (double& a : base) a = std::clamp(a, -*clamp, *clamp);
    population[0].amplitudes = base;
    std::uniform_real_distribution<double> box(clamp ? -*clamp : 0.0, clamp ? *clamp : 0.0);
    const MutationSettings spread{1.0, config.mutation_mean, config.phases.front().mutation_sigma,
                                  clamp};
    for (std::size_t i = 1; i < population.size(); ++i) {
      if (clamp) {
        std::vector<double> g(base.size(), 0.0);
        for (std::size_t k = 0; k < g.size(); ++k) g[k] = frozen[k] ? 0.0 : box(rng);
        population[i].amplitudes = std::move(g);
      } else {
        population[i].amplitudes = mutate(base, spread, rng, frozen);
      }
    }
  }

  std::optional<Genome> elite;
  const std::size_t last_phase = config.phases.size() - 1;
  std::size_t p = 0;
  int in_phase = 0;
  for (int generation = 0;; ++generation) {
    const GaPhase& phase = config.phases[p];
    evaluate_all(population, problem, backend, config.seed, generation, config.threads,
                 run.evaluations);

    std::vector<Genome> pool = population;
    if (elite) pool.push_back(*elite);
    const int m = std::min<int>(config.selected_count, static_cast<int>(pool.size()));
    const std::vector<std::size_t> chosen = select(pool, m);
    const Genome& incumbent = pool[chosen.front()];

    IterationRecord rec;
    rec.iteration = generation;
    rec.phase = mode_name(phase.mode);
    rec.best = *incumbent.evaluation;
    double sum = 0.0;
    double sum2 = 0.0;
    for (const auto& g : population) {
      sum += g.evaluation->j;
      sum2 += g.evaluation->j * g.evaluation->j;
    }
    const double count = static_cast<double>(population.size());
    rec.mean_j = sum / count;
    rec.std_j = std::sqrt(std::max(0.0, sum2 / count - rec.mean_j * rec.mean_j));
    rec.evaluations = run.evaluations;
    rec.best_amplitudes = incumbent.amplitudes;
    run.history.push_back(rec);
    run.best = incumbent;

    const bool reached = config.early_stop_population &&
                         incumbent.evaluation->target_population >= *config.early_stop_population;
    if (reached && p < last_phase) {
      p = last_phase;
      in_phase = 0;
    } else if (++in_phase == phase.generations) {
      ++p;
      in_phase = 0;
    }
    if (p > last_phase) break;

    const GaPhase& next = config.phases[p];
    Rng rng(derive_seed(config.seed, kBreedStream, static_cast<std::uint64_t>(generation)));
    std::uniform_int_distribution<int> pick(0, m - 1);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<Genome> children(static_cast<std::size_t>(next.population_size));
    for (auto& child : children) {
      const int a = pick(rng);
      int b = pick(rng);
      if (m > 1)
        while (b == a) b = pick(rng);
      const auto& pa = pool[chosen[static_cast<std::size_t>(a)]].amplitudes;
      const auto& pb = pool[chosen[static_cast<std::size_t>(b)]].amplitudes;
      child.amplitudes = coin(rng) < config.recombination_probability
                             ? recombine(pa, pb, rng)
                             : pa;
    }
    std::vector<std::size_t> targets(children.size());
    std::iota(targets.begin(), targets.end(), std::size_t{0});
    if (!config.mutate_all) {
      std::shuffle(targets.begin(), targets.end(), rng);
      targets.resize(std::min(targets.size(), static_cast<std::size_t>(config.mutated_individuals)));
      std::sort(targets.begin(), targets.end());
    }
    const MutationSettings settings{config.mutation_probability, config.mutation_mean,
                                    next.mutation_sigma, clamp};
    for (std::size_t i : targets) children[i].amplitudes = mutate(children[i].amplitudes, settings, rng, frozen);
    if (clamp) {
      for (auto& child : children)
        for (double& a : child.amplitudes) a = std::clamp(a, -*clamp, *clamp);
    }
    elite = incumbent;
    population = std::move(children);
  }
  return run;
}

}  // namespace hqoc
