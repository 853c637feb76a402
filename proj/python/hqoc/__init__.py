# Copyright 2026 The hqoc Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Hybrid quantum-classical optimal control of molecular wavefunctions."""

from ._hqoc import (
    BackendSpec,
    Circuit,
    ConfigError,
    ControlProblem,
    Error,
    Evaluation,
    GaConfig,
    MolecularSystem,
    NumericalError,
    PulseParameters,
    ResourceError,
    __version__,
    evaluate,
    evolution_circuit,
    field_at,
    gate_counts,
    ga_run,
    load_pulse,
    load_system,
    nelder_mead_run,
    noise_preset,
    parse_backend,
    propagate_circuit,
    propagate_euler,
    propagate_exact,
    quasi_newton_run,
    resonant_guess,
    run_cli,
)

__all__ = [
    "BackendSpec",
    "Circuit",
    "ConfigError",
    "ControlProblem",
    "Error",
    "Evaluation",
    "GaConfig",
    "MolecularSystem",
    "NumericalError",
    "PulseParameters",
    "ResourceError",
    "__version__",
    "evaluate",
    "evolution_circuit",
    "field_at",
    "gate_counts",
    "ga_run",
    "load_pulse",
    "load_system",
    "nelder_mead_run",
    "noise_preset",
    "parse_backend",
    "propagate_circuit",
    "propagate_euler",
    "propagate_exact",
    "quasi_newton_run",
    "resonant_guess",
    "run_cli",
]
