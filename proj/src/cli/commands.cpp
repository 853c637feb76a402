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
#include <cmath>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>

#include "hqoc/cli.hpp"
#include "hqoc/emulator.hpp"
#include "hqoc/error.hpp"
#include "hqoc/reference.hpp"

namespace hqoc {

namespace {

std::string file_label(std::string text) {
  for (char& c : text)
    if (c == ':' || c == '/' || c == ' ') c = '_';
  return text;
}

Json populations_json(const Eigen::VectorXd& p) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < p.size(); ++k) out.push_back(p(k));
  return out;
}

BackendSpec backend_entry(const Json& entry, const BackendSpec& circuit) {
  if (entry.is_string()) {
    BackendSpec spec = parse_backend(entry.get<std::string>());
    if (spec.method == BackendMethod::Circuit) {
      spec.noise = circuit.noise;
      spec.readout = circuit.readout;
      spec.shots = circuit.shots;
    }
    return spec;
  }
  if (entry.is_object()) {
    Json b = entry;
    if (b.contains("noise") && b.at("noise").is_string()) {
      b["noise"] = noise_to_json(NoiseModel::preset(b.at("noise").get<std::string>()));
    }
    return backend_from_json(b);
  }
  throw ConfigError("backend entries must be strings or objects");
}

/// Populations of the noisy evolution circuit after every step.
WavefunctionTrajectory density_trajectory(const ControlProblem& problem,
                                          const PulseParameters& pulse,
                                          const PropagationGrid& grid, const BackendSpec& b) {
  const Circuit circuit = evolution_circuit(problem, pulse, grid, b.variant);
  const int n = circuit.n_qubits();
  DensityMatrix rho(n);
  WavefunctionTrajectory traj;
  traj.populations.resize(grid.n_steps() + 1, n);
  auto record = [&](int j) {
    const DecodedPopulations d = decode_populations(rho, n);
    traj.times.push_back(grid.time(j));
    traj.populations.row(j) = d.populations.transpose();
    traj.states.push_back(d.populations.cwiseSqrt().cast<std::complex<double>>());
    traj.norm_drift.push_back(std::abs(d.leakage));
  };
  rho.apply(circuit.prefix(0), b.noise);
  record(0);
  for (int j = 0; j < grid.n_steps(); ++j) {
    rho.apply(circuit.step(j), b.noise);
    record(j + 1);
  }
  return traj;
}

WavefunctionTrajectory trajectory_for(const ControlProblem& problem, const PulseParameters& pulse,
                                      const PropagationGrid& grid, const BackendSpec& b) {
  switch (b.method) {
    case BackendMethod::ClassicalEuler: {
      ControlProblem p = problem;
      p.grid = grid;
      return propagate_euler(p, pulse, b.euler_dt);
    }
    case BackendMethod::ClassicalExact: return propagate_exact(problem, pulse, grid);
    case BackendMethod::Circuit:
      return b.noise.is_noiseless() ? circuit_trajectory(problem, pulse, grid, b.variant)
                                    : density_trajectory(problem, pulse, grid, b);
  }
  throw ConfigError("unknown backend");
}

Json genomes_json(const OptimizationRun& run, const PulseParameters& tmpl) {
  Json doc;
  doc["duration"] = tmpl.duration();
  doc["n_harmonics"] = tmpl.n_harmonics();
  doc["include_dc"] = tmpl.include_dc();
  Json its = Json::array();
  for (const auto& r : run.history) {
    its.push_back({{"iteration", r.iteration}, {"amplitudes", r.best_amplitudes}});
  }
  doc["iterations"] = its;
  return doc;
}

void spectrum_row(CsvWriter& csv, const PulseParameters& pulse, int j) {
  double norm2 = 0.0;
  csv.cell(j).cell(pulse.frequency(j));
  for (int a = 0; a < kFieldComponents; ++a) {
    const double v = std::abs(pulse.amplitude(a, j));
    norm2 += v * v;
    csv.cell(v);
  }
  csv.cell(std::sqrt(norm2));
}

double line_strength(const PulseParameters& pulse, int j) {
  double norm2 = 0.0;
  for (int a = 0; a < kFieldComponents; ++a) norm2 += pulse.amplitude(a, j) * pulse.amplitude(a, j);
  return std::sqrt(norm2);
}

std::vector<CircuitVariant> variants_of(const Json& sec) {
  if (!sec.contains("variants")) return all_variants();
  std::vector<CircuitVariant> out;
  for (const auto& v : sec.at("variants")) out.push_back(parse_variant(v.get<std::string>()));
  return out;
}

template <typename T>
std::vector<T> list_of(const Json& sec, const std::string& key, std::vector<T> fallback) {
  if (!sec.contains(key)) return fallback;
  return sec.at(key).get<std::vector<T>>();
}

long long two_qubit_count(const MolecularSystem& system, int steps, CircuitVariant variant) {
  // Constant field through a dc term, so every step carries every coupling.
  const double duration = static_cast<double>(steps);
  std::vector<double> amps(static_cast<std::size_t>(kFieldComponents * 2), 0.0);
  for (int a = 0; a < kFieldComponents; ++a) {
    amps[static_cast<std::size_t>(PulseParameters::flat_index(1, a, 0))] = 1e-3;
  }
  const PulseParameters pulse(duration, 1, true, amps);
  const ControlProblem problem{system, 0, 1, pulse, PropagationGrid(1.0, steps)};
  return gate_counts(evolution_circuit(problem, pulse, problem.grid, variant)).two_qubit;
}

}  // namespace

double fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("fit needs at least two points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("log-log fit needs positive values");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(x.size());
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw DomainError("log-log fit needs distinct abscissae");
  return (n * sxy - sx * sy) / den;
}

MolecularSystem dense_coupling_system(int n_states) {
  if (n_states < 2) throw ConfigError("a system needs at least two states");
  Eigen::VectorXd e(n_states);
  for (int k = 0; k < n_states; ++k) e(k) = 0.01 * k;
  std::array<Eigen::MatrixXd, kFieldComponents> mu;
  const double scale[kFieldComponents] = {1.0, 0.5, 0.25};
  for (int a = 0; a < kFieldComponents; ++a) {
    mu[static_cast<std::size_t>(a)] = Eigen::MatrixXd::Constant(n_states, n_states, scale[a]);
    mu[static_cast<std::size_t>(a)].diagonal().setZero();
  }
  return MolecularSystem(e, mu);
}

int cmd_propagate(const ExperimentConfig& config) {
  const Json sec = config.section("propagate");
  const ControlProblem problem = config.problem();
  const PulseParameters pulse = config.pulse();
  const CsvProvenance prov = config.provenance();
  const auto columns = sec.value("columns", std::string("populations")) == "amplitudes"
                           ? TrajectoryColumns::amplitudes
                           : TrajectoryColumns::populations;

  std::vector<BackendSpec> specs;
  std::vector<PropagationGrid> grids;
  if (sec.contains("backends")) {
    for (const auto& entry : sec.at("backends")) {
      const bool has_dt = entry.is_object() && entry.contains("dt");
      specs.push_back(backend_entry(has_dt ? entry.at("backend") : entry, config.circuit_backend()));
      grids.push_back(has_dt ? PropagationGrid::for_duration(pulse.duration(), entry.at("dt").get<double>())
                             : problem.grid);
    }
  } else {
    specs.push_back(config.backend());
    grids.push_back(problem.grid);
  }

  Json summary;
  summary["config_hash"] = config.hash();
  summary["seed"] = config.seed();
  Json runs = Json::array();
  std::vector<WavefunctionTrajectory> trajectories;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    trajectories.push_back(trajectory_for(problem, pulse, grids[i], specs[i]));
    const auto& t = trajectories.back();
    const std::string name = "trajectory_" + std::to_string(i) + "_" + file_label(specs[i].describe()) + ".csv";
    write_trajectory_csv(t, config.out_dir() / name, prov, columns);
    runs.push_back({{"backend", specs[i].describe()},
                    {"dt", grids[i].dt()},
                    {"file", name},
                    {"final_populations", populations_json(t.populations.row(t.n_samples() - 1).transpose())},
                    {"max_norm_drift", t.max_norm_drift()}});
  }
  summary["runs"] = runs;

  if (trajectories.size() >= 2) {
    const double threshold = sec.value("threshold", 0.02);
    const auto& a = trajectories[0];
    const auto& b = trajectories[1];
    const bool a_coarse = a.n_samples() <= b.n_samples();
    const WavefunctionTrajectory& coarse = a_coarse ? a : b;
    const WavefunctionTrajectory fine = (a_coarse ? b : a).resampled(coarse.times);
    const std::vector<double> trace = deviation_trace(coarse, fine);
    CsvWriter csv(config.out_dir() / "deviation.csv", prov, {"time", "delta_eps"});
    for (std::size_t j = 0; j < trace.size(); ++j) {
      csv.cell(coarse.times[j]).cell(trace[j]);
      csv.end_row();
    }
    const double worst = *std::max_element(trace.begin(), trace.end());
    summary["max_deviation"] = worst;
    summary["threshold"] = threshold;
    summary["threshold_exceeded"] = worst >= threshold;
  }
  save_json(summary, config.out_dir() / "summary.json");
  return kExitOk;
}

int cmd_optimize(const ExperimentConfig& config) {
  const Json sec = config.section("optimize");
  const ControlProblem problem = config.problem();
  const BackendSpec backend = config.backend();
  const std::string optimizer = sec.value("optimizer", std::string("ga"));
  OptimizationRun run;
  if (optimizer == "ga") {
    GaConfig ga = sec.contains("ga") ? ga_config_from_json(sec.at("ga")) : ga_two_phase_config(0);
    ga.seed = config.seed();
    if (sec.contains("threads")) ga.threads = sec.at("threads").get<int>();
    run = ga_run(problem, ga, backend);
  } else if (optimizer == "nelder-mead" || optimizer == "quasi-newton") {
    PulseParameters guess = problem.pulse_template;
    if (sec.value("guess", std::string("resonant")) == "resonant") {
      guess = resonant_guess(problem.system, problem.initial_state_index,
                             problem.target_state_index, guess.duration(), guess.n_harmonics(),
                             guess.include_dc(), sec.value("guess_amplitude", 0.01))
                  .with_clamp(guess.amplitude_clamp());
    }
    const int iterations = sec.value("max_iterations", 100);
    if (optimizer == "nelder-mead") {
      NelderMeadOptions opts;
      opts.max_iterations = iterations;
      run = nelder_mead_run(problem, backend, guess, opts);
    } else {
      QuasiNewtonOptions opts;
      opts.max_iterations = iterations;
      opts.step = sec.value("fd_step", opts.step);
      run = quasi_newton_run(problem, backend, guess, opts);
    }
    run.seed = config.seed();
  } else {
    throw ConfigError("unknown optimizer '" + optimizer + "' (ga|nelder-mead|quasi-newton)");
  }

  const CsvProvenance prov = config.provenance();
  write_history_csv(run, config.out_dir() / "history.csv", prov);
  save_pulse(problem.pulse_template.with_clamp(std::nullopt).with_amplitudes(run.best.amplitudes),
             config.out_dir() / "best_pulse.json");
  save_json(genomes_json(run, problem.pulse_template), config.out_dir() / "genomes.json");
  Json summary = run_summary_json(run);
  summary["config_hash"] = config.hash();
  if (sec.contains("reevaluate")) {
    const BackendSpec other = backend_entry(sec.at("reevaluate"), BackendSpec{});
    const Evaluation e = evaluate(run.best.amplitudes, problem, other, derive_seed(config.seed(), 0x5eed));
    summary["reevaluation"] = {{"backend", other.describe()},
                               {"J", e.j},
                               {"target_population", e.target_population},
                               {"fluence", e.fluence},
                               {"leakage", e.leakage}};
  }
  save_json(summary, config.out_dir() / "summary.json");
  return kExitOk;
}

int cmd_noise_study(const ExperimentConfig& config) {
  const Json sec = config.section("noise_study");
  const ControlProblem problem = config.problem();
  const PulseParameters pulse = config.pulse();
  const BackendSpec backend = config.circuit_backend();
  const int q = problem.system.n_states();
  if (q > kMaxDensityQubits) {
    throw ResourceError("noise study needs " + std::to_string(q) + " qubits, the density backend supports " +
                        std::to_string(kMaxDensityQubits));
  }
  const int steps = sec.value("steps", problem.grid.n_steps());
  if (steps < 0 || steps > problem.grid.n_steps()) {
    throw ConfigError("noise_study.steps must lie in [0, " + std::to_string(problem.grid.n_steps()) + "]");
  }
  const std::vector<CircuitVariant> variants = variants_of(sec);
  const bool sampled = backend.readout == Readout::Sampled;
  const CsvProvenance prov = config.provenance();
  const std::size_t dim = std::size_t{1} << q;

  std::vector<std::string> pop_cols{"variant", "step"};
  for (int k = 0; k < q; ++k) pop_cols.push_back("P" + std::to_string(k));
  pop_cols.push_back("leakage");
  pop_cols.push_back("stderr");
  std::vector<std::string> basis_cols{"variant", "step"};
  for (std::size_t i = 0; i < dim; ++i) basis_cols.push_back("b" + bitstring(i, q));

  CsvWriter fid(config.out_dir() / "fidelity.csv", prov, {"variant", "step", "fidelity", "purity"});
  CsvWriter pops(config.out_dir() / "populations.csv", prov, pop_cols);
  CsvWriter basis(config.out_dir() / "basis_populations.csv", prov, basis_cols);
  CsvWriter gates(config.out_dir() / "gate_counts.csv", prov,
                  {"variant", "step", "one_qubit", "two_qubit", "total"});

  Json summary;
  summary["config_hash"] = config.hash();
  summary["noise"] = noise_to_json(backend.noise);
  summary["thermal_floor"] = 1.0 / static_cast<double>(dim);
  Json per_variant = Json::object();
  for (std::size_t v = 0; v < variants.size(); ++v) {
    const std::string name = to_string(variants[v]);
    const Circuit circuit = evolution_circuit(problem, pulse, problem.grid, variants[v]);
    StateVector psi(q);
    DensityMatrix rho(q);
    GateCounts counts;
    double last_fidelity = 1.0;
    for (int j = 0; j <= steps; ++j) {
      const Circuit chunk = j == 0 ? circuit.prefix(0) : circuit.step(j - 1);
      psi.apply(chunk);
      rho.apply(chunk, backend.noise);
      const GateCounts c = gate_counts(chunk);
      counts.one_qubit += c.one_qubit;
      counts.two_qubit += c.two_qubit;

      last_fidelity = fidelity_to_pure(psi, rho);
      fid.cell(name).cell(j).cell(last_fidelity).cell(rho.purity());
      fid.end_row();

      std::vector<double> probs = rho.diagonal();
      double stderr_max = 0.0;
      if (sampled) {
        const Histogram h = sample_from_probabilities(probs, q, backend.shots,
                                                      derive_seed(config.seed(), v, static_cast<std::uint64_t>(j)));
        for (std::size_t i = 0; i < dim; ++i) {
          const auto it = h.find(bitstring(i, q));
          probs[i] = it == h.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(backend.shots);
          stderr_max = std::max(stderr_max, std::sqrt(probs[i] * (1.0 - probs[i]) / static_cast<double>(backend.shots)));
        }
      }
      pops.cell(name).cell(j);
      double inside = 0.0;
      for (int k = 0; k < q; ++k) {
        const double p = probs[std::size_t{1} << k];
        inside += p;
        pops.cell(p);
      }
      pops.cell(1.0 - inside).cell(stderr_max);
      pops.end_row();
      basis.cell(name).cell(j);
      for (double p : probs) basis.cell(p);
      basis.end_row();
      gates.cell(name).cell(j).cell(counts.one_qubit).cell(counts.two_qubit).cell(counts.total());
      gates.end_row();
    }
    per_variant[name] = {{"final_fidelity", last_fidelity},
                         {"two_qubit_gates", counts.two_qubit},
                         {"total_gates", counts.total()}};
  }
  summary["variants"] = per_variant;
  save_json(summary, config.out_dir() / "summary.json");
  return kExitOk;
}

int cmd_spectrum(const ExperimentConfig& config) {
  const Json sec = config.section("spectrum");
  const PulseParameters pulse = sec.contains("pulse") ? pulse_from_json(sec.at("pulse")) : config.pulse();
  const CsvProvenance prov = config.provenance();
  const std::vector<std::string> cols{"harmonic", "omega", "abs_x", "abs_y", "abs_z", "norm"};
  const int first = pulse.include_dc() ? 0 : 1;
  {
    CsvWriter csv(config.out_dir() / "spectrum.csv", prov, cols);
    for (int j = first; j <= pulse.n_harmonics(); ++j) {
      spectrum_row(csv, pulse, j);
      csv.end_row();
    }
  }
  int dominant = first;
  for (int j = first; j <= pulse.n_harmonics(); ++j)
    if (line_strength(pulse, j) > line_strength(pulse, dominant)) dominant = j;

  Json summary;
  summary["config_hash"] = config.hash();
  summary["dominant_harmonic"] = dominant;
  summary["dominant_omega"] = pulse.frequency(dominant);
  summary["dominant_strength"] = line_strength(pulse, dominant);
  if (config.doc().contains("system")) {
    const MolecularSystem system = config.system();
    const int from = config.doc().value("initial_state", 0);
    const int to = config.doc().value("target_state", 1);
    summary["transition_gap"] = system.gap(from, to);
  }

  if (sec.contains("genomes")) {
    const Json& g = sec.at("genomes");
    std::vector<std::string> sg{"iteration"};
    sg.insert(sg.end(), cols.begin(), cols.end());
    CsvWriter csv(config.out_dir() / "spectrogram.csv", prov, sg);
    const double duration = g.at("duration").get<double>();
    const int m = g.at("n_harmonics").get<int>();
    const bool dc = g.value("include_dc", false);
    for (const auto& it : g.at("iterations")) {
      const PulseParameters p(duration, m, dc, it.at("amplitudes").get<std::vector<double>>());
      for (int j = dc ? 0 : 1; j <= m; ++j) {
        csv.cell(it.at("iteration").get<int>());
        spectrum_row(csv, p, j);
        csv.end_row();
      }
    }
    summary["spectrogram_iterations"] = g.at("iterations").size();
  }
  save_json(summary, config.out_dir() / "summary.json");
  return kExitOk;
}

int cmd_bench(const ExperimentConfig& config) {
  const Json sec = config.section("bench");
  const CsvProvenance prov = config.provenance();
  Json summary;
  summary["config_hash"] = config.hash();

  if (config.doc().contains("system")) {
    const ControlProblem problem = config.problem();
    const PulseParameters pulse = config.pulse();
    const CircuitVariant variant = parse_variant(sec.value("variant", std::string("single-occ")));
    const auto dts = list_of<double>(sec, "dt_values", {4.0, 2.0, 1.0, 0.5});
    const double dt_ref = sec.value("reference_dt", 0.01);
    const WavefunctionTrajectory truth =
        propagate_exact(problem, pulse, PropagationGrid::for_duration(pulse.duration(), dt_ref));
    CsvWriter csv(config.out_dir() / "trotter_error.csv", prov, {"dt", "max_deviation"});
    std::vector<double> errors;
    for (double dt : dts) {
      const PropagationGrid grid = PropagationGrid::for_duration(pulse.duration(), dt);
      const WavefunctionTrajectory c = circuit_trajectory(problem, pulse, grid, variant);
      const double err = max_abs_deviation(c, truth.resampled(c.times));
      errors.push_back(err);
      csv.cell(dt).cell(err);
      csv.end_row();
    }
    summary["trotter"] = {{"variant", to_string(variant)}, {"dt", dts}, {"max_deviation", errors}};
    if (dts.size() >= 2) summary["trotter"]["order"] = fit_exponent(dts, errors);
  }

  const auto ks = list_of<int>(sec, "k_values", {1, 2, 4, 8, 16, 32, 64});
  const int q_for_k = sec.value("k_scan_states", 4);
  const auto qs = list_of<int>(sec, "q_values", {8, 16, 32, 64});
  const int k_for_q = sec.value("q_scan_steps", 1);
  const std::vector<CircuitVariant> variants = variants_of(sec);

  Json k_fit = Json::object();
  Json q_fit = Json::object();
  {
    std::vector<std::string> cols{"K"};
    for (auto v : variants) cols.push_back(to_string(v));
    CsvWriter csv(config.out_dir() / "gates_vs_k.csv", prov, cols);
    const MolecularSystem system = dense_coupling_system(q_for_k);
    std::vector<std::vector<double>> y(variants.size());
    for (int k : ks) {
      csv.cell(k);
      for (std::size_t v = 0; v < variants.size(); ++v) {
        const long long n = two_qubit_count(system, k, variants[v]);
        y[v].push_back(static_cast<double>(n));
        csv.cell(n);
      }
      csv.end_row();
    }
    const std::vector<double> x(ks.begin(), ks.end());
    for (std::size_t v = 0; v < variants.size(); ++v) k_fit[to_string(variants[v])] = fit_exponent(x, y[v]);
  }
  {
    std::vector<std::string> cols{"Q"};
    for (auto v : variants) cols.push_back(to_string(v));
    CsvWriter csv(config.out_dir() / "gates_vs_q.csv", prov, cols);
    std::vector<std::vector<double>> y(variants.size());
    for (int q : qs) {
      const MolecularSystem system = dense_coupling_system(q);
      csv.cell(q);
      for (std::size_t v = 0; v < variants.size(); ++v) {
        const long long n = two_qubit_count(system, k_for_q, variants[v]);
        y[v].push_back(static_cast<double>(n));
        csv.cell(n);
      }
      csv.end_row();
    }
    const std::vector<double> x(qs.begin(), qs.end());
    for (std::size_t v = 0; v < variants.size(); ++v) q_fit[to_string(variants[v])] = fit_exponent(x, y[v]);
  }
  summary["k_exponent"] = k_fit;
  summary["q_exponent"] = q_fit;
  save_json(summary, config.out_dir() / "summary.json");
  return kExitOk;
}

int cmd_gate_count(const ExperimentConfig& config) {
  const Json sec = config.section("gate_count");
  const ControlProblem problem = config.problem();
  const PulseParameters pulse = config.pulse();
  const std::vector<CircuitVariant> variants = variants_of(sec);
  const CsvProvenance prov = config.provenance();
  const std::vector<std::string> kinds{"X", "H", "S", "SDG", "RZ", "PHASE", "CNOT"};
  std::vector<std::string> cols{"variant", "steps", "one_qubit", "two_qubit", "total"};
  cols.insert(cols.end(), kinds.begin(), kinds.end());
  CsvWriter csv(config.out_dir() / "gate_counts.csv", prov, cols);
  Json summary;
  summary["config_hash"] = config.hash();
  for (auto variant : variants) {
    const Circuit circuit = evolution_circuit(problem, pulse, problem.grid, variant);
    const std::string name = to_string(variant);
    if (sec.value("dump", false)) {
      std::ofstream out(config.out_dir() / ("circuit_" + name + ".txt"));
      write_circuit(circuit, out);
    }
    GateCounts total;
    for (int j = 0; j <= circuit.n_steps(); ++j) {
      const GateCounts c = gate_counts(j == 0 ? circuit.prefix(0) : circuit.step(j - 1));
      total.one_qubit += c.one_qubit;
      total.two_qubit += c.two_qubit;
      for (const auto& [k, n] : c.by_kind) total.by_kind[k] += n;
      csv.cell(name).cell(j).cell(total.one_qubit).cell(total.two_qubit).cell(total.total());
      for (const auto& k : kinds) {
        const auto it = total.by_kind.find(k);
        csv.cell(it == total.by_kind.end() ? 0LL : it->second);
      }
      csv.end_row();
    }
    summary[name] = {{"steps", circuit.n_steps()},
                     {"one_qubit", total.one_qubit},
                     {"two_qubit", total.two_qubit},
                     {"total", total.total()}};
  }
  save_json(summary, config.out_dir() / "summary.json");
  return kExitOk;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Hybrid quantum-classical optimal control of molecular wavefunctions", "hqoc"};
  app.set_version_flag("--version", std::string(HQOC_VERSION));
  GlobalOptions g;
  std::string config;
  std::uint64_t seed = 0;
  std::string backend, variant, noise, readout;
  long long shots = 0;
  app.add_option("--config", config, "Experiment JSON file");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides the config)");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  auto* backend_opt = app.add_option("--backend", backend,
                                     "classical-euler[:DT] | classical-exact | circuit[:VARIANT]");
  auto* variant_opt = app.add_option("--variant", variant, "jw-full | single-occ | single-occ-reordered");
  auto* noise_opt = app.add_option("--noise", noise, "none | bf | sq-depol-1 | sq-depol-2 | mixed | custom:FILE");
  auto* shots_opt = app.add_option("--shots", shots, "Shots for sampled readout (default 2048)");
  auto* readout_opt = app.add_option("--readout", readout, "exact | sampled");

  using Command = int (*)(const ExperimentConfig&);
  const std::vector<std::pair<std::string, std::pair<std::string, Command>>> commands{
      {"propagate", {"Population traces on one or more backends", &cmd_propagate}},
      {"optimize", {"Run the GA, Nelder-Mead or quasi-Newton optimizer", &cmd_optimize}},
      {"noise-study", {"Fidelity, populations and gate counts against steps", &cmd_noise_study}},
      {"spectrum", {"Harmonic spectrum of a pulse and of an optimization history", &cmd_spectrum}},
      {"bench", {"Trotter error and gate-count scaling tables", &cmd_bench}},
      {"gate-count", {"Gate counts of the evolution circuits", &cmd_gate_count}},
  };
  for (const auto& [name, info] : commands) app.add_subcommand(name, info.first)->fallthrough();
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }
  if (!config.empty()) g.config = config;
  if (*seed_opt) g.seed = seed;
  if (*backend_opt) g.backend = backend;
  if (*variant_opt) g.variant = variant;
  if (*noise_opt) g.noise = noise;
  if (*shots_opt) g.shots = shots;
  if (*readout_opt) g.readout = readout;

  try {
    const ExperimentConfig experiment = ExperimentConfig::load(g);
    for (const auto& [name, info] : commands) {
      if (app.got_subcommand(name)) return info.second(experiment);
    }
  } catch (const std::exception& e) {
    std::cerr << "hqoc: error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitConfig;
}

}  // namespace hqoc
