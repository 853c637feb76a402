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
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hqoc/cli.hpp"
#include "hqoc/error.hpp"
#include "support.hpp"

using namespace hqoc;
using namespace hqoc::testing;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "hqoc");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path write_config(const fs::path& dir, const std::string& name, const Json& doc) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream(path) << doc.dump(2);
  return path;
}

Json base_doc() {
  Json doc;
  doc["system"] = data_path("cyan3_like.json").string();
  doc["pulse"] = data_path("cyan3_resonant_pulse.json").string();
  doc["dt"] = 1.0;
  return doc;
}

Json zero_pulse_doc() {
  Json doc = base_doc();
  doc.erase("pulse");
  doc["duration"] = 250.0;
  doc["n_harmonics"] = 15;
  doc["include_dc"] = false;
  return doc;
}

/// Data rows of a CSV after the provenance comment and the header.
std::vector<std::vector<std::string>> rows(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::vector<std::vector<std::string>> out;
  std::getline(in, line);
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    out.push_back(cells);
  }
  return out;
}

Json summary(const fs::path& dir) { return load_json(dir / "summary.json"); }

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) files[e.path().filename().string()] = slurp(e.path());
  return files;
}

}  // namespace

TEST_CASE("propagate: threshold at dt 1 and dt 5") {
  const fs::path dir = fresh_dir("cli_prop");
  Json doc = base_doc();
  doc["propagate"] = {{"backends", Json::array({"classical-euler:0.01", {{"backend", "circuit:single-occ"}, {"dt", 1.0}}})}};
  const fs::path cfg = write_config(dir, "p1.json", doc);
  REQUIRE(run({"--config", cfg.string(), "--out", (dir / "o1").string(), "propagate"}) == 0);
  const Json s1 = summary(dir / "o1");
  CHECK(s1["max_deviation"].get<double>() < 0.02);
  CHECK_FALSE(s1["threshold_exceeded"].get<bool>());

  doc["propagate"]["backends"][1]["dt"] = 5.0;
  const fs::path cfg5 = write_config(dir, "p5.json", doc);
  REQUIRE(run({"--config", cfg5.string(), "--out", (dir / "o5").string(), "propagate"}) == 0);
  CHECK(summary(dir / "o5")["threshold_exceeded"].get<bool>());
}

TEST_CASE("propagate: zero pulse gives flat populations") {
  const fs::path dir = fresh_dir("cli_flat");
  Json doc = zero_pulse_doc();
  doc["propagate"] = {{"backends", Json::array({"classical-exact", "circuit:jw-full"})}};
  const fs::path cfg = write_config(dir, "c.json", doc);
  REQUIRE(run({"--config", cfg.string(), "--out", (dir / "o").string(), "propagate"}) == 0);
  for (const auto& e : fs::directory_iterator(dir / "o")) {
    if (e.path().filename().string().rfind("trajectory_", 0) != 0) continue;
    for (const auto& r : rows(e.path())) {
      CHECK(std::abs(std::stod(r[1]) - 1.0) < 1e-12);
      CHECK(std::abs(std::stod(r[2])) < 1e-12);
    }
  }
}

TEST_CASE("CSV provenance comment line") {
  const fs::path dir = fresh_dir("cli_prov");
  Json doc = base_doc();
  const fs::path cfg = write_config(dir, "c.json", doc);
  REQUIRE(run({"--config", cfg.string(), "--seed", "17", "--out", (dir / "o").string(), "gate-count"}) == 0);
  std::ifstream in(dir / "o" / "gate_counts.csv");
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("# hqoc " HQOC_VERSION, 0) == 0);
  CHECK(first.find("config_hash=") != std::string::npos);
  CHECK(first.find("seed=17") != std::string::npos);
}

TEST_CASE("exit codes") {
  const fs::path dir = fresh_dir("cli_exit");
  CHECK(run({"--version"}) == 0);
  CHECK(run({"--out", (dir / "a").string()}) == kExitConfig);
  CHECK(run({"--out", (dir / "a").string(), "teleport"}) == kExitConfig);
  CHECK(run({"--config", (dir / "missing.json").string(), "--out", (dir / "a").string(), "propagate"}) == kExitConfig);

  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(run({"--config", (dir / "broken.json").string(), "--out", (dir / "a").string(), "propagate"}) == kExitConfig);

  const fs::path cfg = write_config(dir, "c.json", base_doc());
  CHECK(run({"--config", cfg.string(), "--noise", "thermal", "--out", (dir / "a").string(), "noise-study"}) == kExitConfig);

  Json big = base_doc();
  big["system"] = data_path("cyan11_like.json").string();
  big.erase("pulse");
  big["duration"] = 250.0;
  big["n_harmonics"] = 15;
  big["noise_study"] = {{"steps", 2}};
  const fs::path cfg11 = write_config(dir, "big.json", big);
  CHECK(run({"--config", cfg11.string(), "--noise", "mixed", "--out", (dir / "b").string(), "noise-study"}) == kExitResource);

  Json wild = base_doc();
  wild.erase("pulse");
  std::vector<double> amps(48, 0.0);
  amps[10] = 1e150;
  wild["pulse"] = {{"duration", 250.0}, {"n_harmonics", 15}, {"include_dc", false}, {"amplitudes", amps}};
  wild["propagate"] = {{"backends", Json::array({"classical-euler:0.01"})}};
  const fs::path cfgw = write_config(dir, "wild.json", wild);
  CHECK(run({"--config", cfgw.string(), "--out", (dir / "w").string(), "propagate"}) == kExitNumerical);
}

TEST_CASE("exit_code_for maps the error hierarchy") {
  CHECK(exit_code_for(ConfigError("x")) == kExitConfig);
  CHECK(exit_code_for(NumericalError("x")) == kExitNumerical);
  CHECK(exit_code_for(DomainError("x")) == kExitNumerical);
  CHECK(exit_code_for(ResourceError("x")) == kExitResource);
  CHECK(exit_code_for(CircuitError("x")) == kExitConfig);
  CHECK(exit_code_for(std::runtime_error("x")) == kExitFailure);
}

TEST_CASE("noise-study: zero noise keeps fidelity at one") {
  const fs::path dir = fresh_dir("cli_noise");
  Json doc = base_doc();
  doc["noise_study"] = {{"steps", 20}};
  const fs::path cfg = write_config(dir, "c.json", doc);
  REQUIRE(run({"--config", cfg.string(), "--noise", "none", "--out", (dir / "o").string(), "noise-study"}) == 0);
  const auto fid = rows(dir / "o" / "fidelity.csv");
  CHECK(fid.size() == 3 * 21);
  for (const auto& r : fid) CHECK(std::abs(std::stod(r[2]) - 1.0) < 1e-9);
  const Json s = summary(dir / "o");
  // The fixture couples states 0 and 2, which are not adjacent qubits.
  CHECK(s["variants"]["jw-full"]["two_qubit_gates"].get<long long>() >
        s["variants"]["single-occ"]["two_qubit_gates"].get<long long>());
  CHECK(s["thermal_floor"].get<double>() == 0.125);
}

TEST_CASE("noise-study: sampled readout reports error bars") {
  const fs::path dir = fresh_dir("cli_sampled");
  Json doc = base_doc();
  doc["noise_study"] = {{"steps", 4}, {"variants", Json::array({"single-occ"})}};
  const fs::path cfg = write_config(dir, "c.json", doc);
  REQUIRE(run({"--config", cfg.string(), "--noise", "mixed", "--readout", "sampled", "--shots", "512", "--out",
               (dir / "o").string(), "noise-study"}) == 0);
  const auto pops = rows(dir / "o" / "populations.csv");
  REQUIRE(pops.size() == 5);
  CHECK(std::stod(pops.back().back()) > 0.0);
}

TEST_CASE("spectrum: single line, zero pulse, dominant harmonic") {
  const fs::path dir = fresh_dir("cli_spec");
  const fs::path cfg = write_config(dir, "c.json", base_doc());
  REQUIRE(run({"--config", cfg.string(), "--out", (dir / "o").string(), "spectrum"}) == 0);
  int nonzero = 0;
  for (const auto& r : rows(dir / "o" / "spectrum.csv")) nonzero += std::stod(r[5]) > 0.0;
  CHECK(nonzero == 1);
  const Json s = summary(dir / "o");
  CHECK(s["dominant_harmonic"] == 10);
  CHECK(s["dominant_omega"].get<double>() == doctest::Approx(10 * std::numbers::pi / 250.0));

  const fs::path zcfg = write_config(dir, "z.json", zero_pulse_doc());
  REQUIRE(run({"--config", zcfg.string(), "--out", (dir / "z").string(), "spectrum"}) == 0);
  for (const auto& r : rows(dir / "z" / "spectrum.csv")) CHECK(std::stod(r[5]) == 0.0);
}

TEST_CASE("bench: growth exponents") {
  const fs::path dir = fresh_dir("cli_bench");
  Json doc = base_doc();
  doc["bench"] = {{"dt_values", {2.0, 1.0, 0.5}},
                  {"reference_dt", 0.05},
                  {"k_values", {1, 2, 4, 8, 16}},
                  {"q_values", {8, 16, 32}}};
  const fs::path cfg = write_config(dir, "c.json", doc);
  REQUIRE(run({"--config", cfg.string(), "--out", (dir / "o").string(), "bench"}) == 0);
  const Json s = summary(dir / "o");
  for (const char* v : {"jw-full", "single-occ", "single-occ-reordered"})
    CHECK(std::abs(s["k_exponent"][v].get<double>() - 1.0) < 0.01);
  CHECK(std::abs(s["q_exponent"]["single-occ"].get<double>() - 2.0) < 0.1);
  CHECK(std::abs(s["trotter"]["order"].get<double>() - 1.0) < 0.25);
}

TEST_CASE("optimize writes history, best pulse and re-evaluation") {
  const fs::path dir = fresh_dir("cli_opt");
  Json doc = zero_pulse_doc();
  doc["seed"] = 2;
  doc["backend"] = "classical-exact";
  doc["optimize"] = {{"optimizer", "ga"},
                     {"ga",
                      {{"phases",
                        {{{"mode", "exploration"}, {"generations", 2}, {"population_size", 12}, {"mutation_sigma", 0.001}},
                         {{"mode", "convergence"}, {"generations", 2}, {"population_size", 12}, {"mutation_sigma", 0.0001}}}},
                       {"selected_count", 4}}},
                     {"reevaluate", "circuit:single-occ"}};
  const fs::path cfg = write_config(dir, "c.json", doc);
  REQUIRE(run({"--config", cfg.string(), "--out", (dir / "o").string(), "optimize"}) == 0);
  CHECK(rows(dir / "o" / "history.csv").size() == 4);
  const PulseParameters best = load_pulse(dir / "o" / "best_pulse.json");
  CHECK(best.n_harmonics() == 15);
  const Json s = summary(dir / "o");
  CHECK(s.contains("reevaluation"));

  REQUIRE(run({"--config", cfg.string(), "--out", (dir / "s").string(), "spectrum"}) == 0);
  doc["spectrum"] = {{"genomes", (dir / "o" / "genomes.json").string()}};
  const fs::path scfg = write_config(dir, "s.json", doc);
  REQUIRE(run({"--config", scfg.string(), "--out", (dir / "g").string(), "spectrum"}) == 0);
  CHECK(fs::exists(dir / "g" / "spectrogram.csv"));
}

TEST_CASE("every command is byte-for-byte reproducible") {
  const fs::path dir = fresh_dir("cli_det");
  Json doc = base_doc();
  doc["seed"] = 4;
  doc["propagate"] = {{"backends", Json::array({"classical-euler:0.05", "circuit:single-occ"})}};
  doc["noise_study"] = {{"steps", 6}};
  doc["bench"] = {{"dt_values", {2.0, 1.0}}, {"reference_dt", 0.1}, {"k_values", {1, 2, 4}}, {"q_values", {4, 8}}};
  doc["optimize"] = {{"optimizer", "ga"},
                     {"ga",
                      {{"phases",
                        {{{"mode", "exploration"}, {"generations", 2}, {"population_size", 10}, {"mutation_sigma", 0.001}}}},
                       {"selected_count", 4}}}};
  const fs::path cfg = write_config(dir, "c.json", doc);
  for (const char* cmd : {"propagate", "optimize", "noise-study", "spectrum", "bench", "gate-count"}) {
    const fs::path a = dir / (std::string(cmd) + "_a");
    const fs::path b = dir / (std::string(cmd) + "_b");
    REQUIRE(run({"--config", cfg.string(), "--noise", "mixed", "--out", a.string(), cmd}) == 0);
    REQUIRE(run({"--config", cfg.string(), "--noise", "mixed", "--out", b.string(), cmd}) == 0);
    CHECK_MESSAGE(snapshot(a) == snapshot(b), cmd);
  }
}

TEST_CASE("fit_exponent and dense coupling system") {
  std::vector<double> x{1, 2, 4, 8}, y;
  for (double v : x) y.push_back(3.0 * v * v);
  CHECK(fit_exponent(x, y) == doctest::Approx(2.0).epsilon(1e-12));
  const MolecularSystem sys = dense_coupling_system(5);
  CHECK(sys.n_states() == 5);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) CHECK(sys.dipole(0)(i, j) != 0.0);
}

TEST_CASE("config overrides apply on top of the file") {
  const fs::path dir = fresh_dir("cli_override");
  const fs::path cfg = write_config(dir, "c.json", base_doc());
  GlobalOptions opts;
  opts.config = cfg;
  opts.out = dir / "o";
  opts.seed = 99;
  opts.backend = "circuit";
  opts.variant = "jw-full";
  opts.noise = "bf";
  const ExperimentConfig c = ExperimentConfig::load(opts);
  CHECK(c.seed() == 99);
  const BackendSpec b = c.backend();
  CHECK(b.method == BackendMethod::Circuit);
  CHECK(b.variant == CircuitVariant::JwFull);
  CHECK(b.noise == NoiseModel::preset("bf"));
  CHECK(c.problem().system.n_states() == 3);

  std::ofstream(dir / "noise.json") << R"({"p_bitflip_1q": 0.1, "p_bitflip_2q": 0.0, "p_depol_1q": 0.0, "p_depol_2q": 0.0})";
  opts.noise = "custom:" + (dir / "noise.json").string();
  CHECK(ExperimentConfig::load(opts).backend().noise.p_bitflip_1q == 0.1);
}
