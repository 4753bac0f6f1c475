// Copyright 2026 the decohist authors
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

#pragma once

#include "decohist/histories.hpp"
#include "decohist/qops.hpp"

namespace decohist {

/// Harmonic oscillator truncated to the N lowest levels, H = w * diag(0..N-1).
struct TruncatedOscillator {
  int levels;      // N
  double omega;    // angular frequency

  TruncatedOscillator(int n, double w);

  Mat hamiltonian() const;
  /// Interval after which phase states shift by one index: 2*pi/(N*w).
  double step_interval() const;
};

struct PhaseBasis {
  std::vector<Vec> states;  // |phi_j>, phi_j = 2*pi*j/N
};

/// <l|phi_j> = N^{-1/2} exp(2*pi*i*l*j/N); the N states are orthonormal.
PhaseBasis phase_states(const TruncatedOscillator& osc);

/// Propagator over one step interval; cyclically permutes the phase basis
/// (by one index, fixed direction, up to a global phase).
Mat step_unitary(const TruncatedOscillator& osc);

/// Phase-state projectors at consecutive step intervals starting at t = 0.
EventSchedule phase_history_schedule(const TruncatedOscillator& osc, int n_steps);

/// Rank-1 energy projectors at arbitrary times.
EventSchedule energy_history_schedule(const TruncatedOscillator& osc,
                                      const std::vector<double>& times);

struct MixedBasisReport {
  PureEndpointReport ground_to_ground;  // ground -> phase events -> ground
  bool all_ratios_one = false;          // every defined pair at ratio 1 (1e-8)
  double deterministic_max_ratio = 0.0; // control case: matching-phase closure
};

/// Ground -> phase-sequence -> ground histories are fully coherent, while
/// the deterministic closure decoheres.
MixedBasisReport mixed_basis_coherence_demo(const TruncatedOscillator& osc, int n_steps);

}  // namespace decohist
