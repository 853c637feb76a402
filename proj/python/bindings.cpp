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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hqoc/cli.hpp"
#include "hqoc/emulator.hpp"
#include "hqoc/encoding.hpp"
#include "hqoc/io.hpp"
#include "hqoc/model.hpp"
#include "hqoc/optimize.hpp"
#include "hqoc/reference.hpp"

namespace py = pybind11;
using namespace hqoc;

namespace {

py::dict trajectory_dict(const WavefunctionTrajectory& t) {
  py::dict d;
  d["times"] = t.times;
  d["populations"] = t.populations;
  d["norm_drift"] = t.norm_drift;
  return d;
}

py::dict evaluation_dict(const Evaluation& e) {
  py::dict d;
  d["J"] = e.j;
  d["target_population"] = e.target_population;
  d["fluence"] = e.fluence;
  d["field_integral"] = e.field_integral;
  d["leakage"] = e.leakage;
  return d;
}

py::dict run_dict(const OptimizationRun& run) {
  py::dict d;
  d["optimizer"] = run.optimizer;
  d["backend"] = run.backend;
  d["seed"] = run.seed;
  d["evaluations"] = run.evaluations;
  d["best_amplitudes"] = run.best.amplitudes;
  if (run.best.evaluation) d["best"] = evaluation_dict(*run.best.evaluation);
  py::list history;
  for (const auto& r : run.history) {
    py::dict h;
    h["iteration"] = r.iteration;
    h["phase"] = r.phase;
    h["best"] = evaluation_dict(r.best);
    h["mean_J"] = r.mean_j;
    h["std_J"] = r.std_j;
    h["evaluations"] = r.evaluations;
    history.append(h);
  }
  d["history"] = history;
  d["warnings"] = run.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hqoc, m) {
  m.doc() = "Hybrid quantum-classical optimal control of molecular wavefunctions";
  m.attr("__version__") = HQOC_VERSION;

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", error.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", error.ptr());

  py::class_<MolecularSystem>(m, "MolecularSystem")
      .def(py::init([](const Eigen::VectorXd& energies, const Eigen::MatrixXd& mx,
                       const Eigen::MatrixXd& my, const Eigen::MatrixXd& mz,
                       std::vector<std::string> labels) {
             return MolecularSystem(energies, std::array<Eigen::MatrixXd, kFieldComponents>{mx, my, mz},
                                   std::move(labels));
           }),
           py::arg("energies"), py::arg("dipole_x"), py::arg("dipole_y"), py::arg("dipole_z"),
           py::arg("labels") = std::vector<std::string>{})
      .def_property_readonly("n_states", &MolecularSystem::n_states)
      .def_property_readonly("energies", [](const MolecularSystem& s) { return Eigen::VectorXd(s.energies()); })
      .def_property_readonly("labels", &MolecularSystem::labels)
      .def("dipole", [](const MolecularSystem& s, int c) { return Eigen::MatrixXd(s.dipole(c)); },
           py::arg("component"))
      .def("gap", &MolecularSystem::gap, py::arg("initial"), py::arg("target"));

  py::class_<PulseParameters>(m, "PulseParameters")
      .def(py::init<double, int, bool, std::vector<double>, std::optional<double>>(),
           py::arg("duration"), py::arg("n_harmonics"), py::arg("include_dc"),
           py::arg("amplitudes"), py::arg("amplitude_clamp") = std::nullopt)
      .def_static("zeros", &PulseParameters::zeros, py::arg("duration"), py::arg("n_harmonics"),
                  py::arg("include_dc") = false, py::arg("amplitude_clamp") = std::nullopt)
      .def_property_readonly("duration", &PulseParameters::duration)
      .def_property_readonly("n_harmonics", &PulseParameters::n_harmonics)
      .def_property_readonly("include_dc", &PulseParameters::include_dc)
      .def_property_readonly("amplitude_clamp", &PulseParameters::amplitude_clamp)
      .def_property_readonly("amplitudes",
                             [](const PulseParameters& p) {
                               return std::vector<double>(p.amplitudes().begin(), p.amplitudes().end());
                             })
      .def("amplitude", &PulseParameters::amplitude, py::arg("component"), py::arg("harmonic"))
      .def("frequency", &PulseParameters::frequency, py::arg("harmonic"))
      .def("with_amplitudes", &PulseParameters::with_amplitudes, py::arg("amplitudes"));

  py::class_<ControlProblem>(m, "ControlProblem")
      .def(py::init([](const MolecularSystem& system, const PulseParameters& pulse, double dt,
                       int initial, int target, double weight, const std::string& mode) {
             ControlProblem p{system,
                              initial,
                              target,
                              pulse,
                              PropagationGrid::for_duration(pulse.duration(), dt),
                              weight,
                              parse_penalty_mode(mode)};
             p.validate();
             return p;
           }),
           py::arg("system"), py::arg("pulse"), py::arg("dt") = 1.0, py::arg("initial_state") = 0,
           py::arg("target_state") = 1, py::arg("penalty_weight") = 1.0,
           py::arg("penalty_mode") = "functional")
      .def_property_readonly("n_steps", [](const ControlProblem& p) { return p.grid.n_steps(); })
      .def_property_readonly("dt", [](const ControlProblem& p) { return p.grid.dt(); })
      .def_readonly("pulse_template", &ControlProblem::pulse_template);

  py::class_<BackendSpec>(m, "BackendSpec")
      .def_property_readonly("description", &BackendSpec::describe)
      .def("__repr__", [](const BackendSpec& b) { return "BackendSpec('" + b.describe() + "')"; });

  py::class_<Evaluation>(m, "Evaluation")
      .def_readonly("J", &Evaluation::j)
      .def_readonly("target_population", &Evaluation::target_population)
      .def_readonly("fluence", &Evaluation::fluence)
      .def_readonly("field_integral", &Evaluation::field_integral)
      .def_readonly("leakage", &Evaluation::leakage);

  py::class_<GaConfig>(m, "GaConfig")
      .def_static("two_phase", &ga_two_phase_config, py::arg("seed") = 0)
      .def_static("alternating", &ga_alternating_config, py::arg("seed") = 0)
      .def_static("from_json",
                  [](const std::string& text) { return ga_config_from_json(Json::parse(text)); })
      .def("to_json", [](const GaConfig& c) { return ga_config_to_json(c).dump(); })
      .def_readwrite("seed", &GaConfig::seed)
      .def_readwrite("selected_count", &GaConfig::selected_count)
      .def_readwrite("mutation_probability", &GaConfig::mutation_probability)
      .def_readwrite("amplitude_clamp", &GaConfig::amplitude_clamp)
      .def_readwrite("early_stop_population", &GaConfig::early_stop_population)
      .def_property_readonly("total_generations", &GaConfig::total_generations);

  py::class_<Circuit>(m, "Circuit")
      .def_property_readonly("n_qubits", &Circuit::n_qubits)
      .def_property_readonly("n_steps", &Circuit::n_steps)
      .def("__len__", [](const Circuit& c) { return c.gates().size(); })
      .def("dump", [](const Circuit& c) { return dump_circuit(c); });

  m.def("load_system", &load_system, py::arg("path"));
  m.def("load_pulse", &load_pulse, py::arg("path"));
  m.def("field_at", &field_at, py::arg("pulse"), py::arg("t"));
  m.def("resonant_guess", &resonant_guess, py::arg("system"), py::arg("initial"),
        py::arg("target"), py::arg("duration"), py::arg("n_harmonics"),
        py::arg("include_dc") = false, py::arg("amplitude") = 0.01);
  m.def("parse_backend",
        [](const std::string& text, const std::string& noise, const std::string& readout,
           long long shots) {
          BackendSpec b = parse_backend(text);
          b.noise = NoiseModel::preset(noise);
          b.readout = parse_readout(readout);
          b.shots = shots;
          b.validate();
          return b;
        },
        py::arg("text"), py::arg("noise") = "none", py::arg("readout") = "exact",
        py::arg("shots") = 2048);
  m.def("noise_preset", [](const std::string& name) {
    const NoiseModel n = NoiseModel::preset(name);
    return std::vector<double>{n.p_bitflip_1q, n.p_bitflip_2q, n.p_depol_1q, n.p_depol_2q};
  });

  m.def("propagate_exact",
        [](const ControlProblem& p, const PulseParameters& pulse) {
          return trajectory_dict(propagate_exact(p, pulse, p.grid));
        },
        py::arg("problem"), py::arg("pulse"));
  m.def("propagate_euler",
        [](const ControlProblem& p, const PulseParameters& pulse, double dt_fine) {
          return trajectory_dict(propagate_euler(p, pulse, dt_fine));
        },
        py::arg("problem"), py::arg("pulse"), py::arg("dt_fine") = 0.01);
  m.def("propagate_circuit",
        [](const ControlProblem& p, const PulseParameters& pulse, const std::string& variant) {
          return trajectory_dict(circuit_trajectory(p, pulse, p.grid, parse_variant(variant)));
        },
        py::arg("problem"), py::arg("pulse"), py::arg("variant") = "single-occ");
  m.def("evolution_circuit",
        [](const ControlProblem& p, const PulseParameters& pulse, const std::string& variant) {
          return evolution_circuit(p, pulse, p.grid, parse_variant(variant));
        },
        py::arg("problem"), py::arg("pulse"), py::arg("variant") = "single-occ");
  m.def("gate_counts", [](const Circuit& c) {
    const GateCounts g = gate_counts(c);
    py::dict d;
    d["one_qubit"] = g.one_qubit;
    d["two_qubit"] = g.two_qubit;
    d["total"] = g.total();
    d["by_kind"] = g.by_kind;
    return d;
  });

  m.def("evaluate",
        [](const std::vector<double>& amplitudes, const ControlProblem& p, const BackendSpec& b,
           std::uint64_t seed) { return evaluate(amplitudes, p, b, seed); },
        py::arg("amplitudes"), py::arg("problem"), py::arg("backend"), py::arg("seed") = 0);
  m.def("ga_run",
        [](const ControlProblem& p, const GaConfig& c, const BackendSpec& b) {
          py::gil_scoped_release release;
          OptimizationRun run = ga_run(p, c, b);
          py::gil_scoped_acquire acquire;
          return run_dict(run);
        },
        py::arg("problem"), py::arg("config"), py::arg("backend"));
  m.def("nelder_mead_run",
        [](const ControlProblem& p, const BackendSpec& b, const PulseParameters& guess,
           int max_iterations) {
          NelderMeadOptions o;
          o.max_iterations = max_iterations;
          return run_dict(nelder_mead_run(p, b, guess, o));
        },
        py::arg("problem"), py::arg("backend"), py::arg("guess"), py::arg("max_iterations") = 100);
  m.def("quasi_newton_run",
        [](const ControlProblem& p, const BackendSpec& b, const PulseParameters& guess,
           int max_iterations, double step) {
          QuasiNewtonOptions o;
          o.max_iterations = max_iterations;
          o.step = step;
          return run_dict(quasi_newton_run(p, b, guess, o));
        },
        py::arg("problem"), py::arg("backend"), py::arg("guess"), py::arg("max_iterations") = 100,
        py::arg("step") = 1e-5);

  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "hqoc");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
  }, py::arg("args"));
}
