# Copyright 2026 the decohist authors
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

"""Decoherent-histories and open-quantum-system toolbox."""

from ._decohist import (
    cosmo,
    de_sitter,
    functional,
    haar_unitary,
    hermitian_sqrt,
    jump_ensemble,
    lindblad_propagate,
    matrix_exponential,
    mixed_coherence,
    oscillator_energy,
    oscillator_phase,
    polar_decompose,
    povm_step_order,
    random_histories,
    reinflation_log_probability,
    relaxation,
    trace_distance,
    ts_functional,
)

__all__ = [
    "cosmo",
    "de_sitter",
    "functional",
    "haar_unitary",
    "hermitian_sqrt",
    "jump_ensemble",
    "lindblad_propagate",
    "matrix_exponential",
    "mixed_coherence",
    "oscillator_energy",
    "oscillator_phase",
    "polar_decompose",
    "povm_step_order",
    "random_histories",
    "reinflation_log_probability",
    "relaxation",
    "trace_distance",
    "ts_functional",
]
