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

#include <stdexcept>

namespace decohist::cosmo {

/// de Sitter phase in Planck units: horizon length l = sqrt(3/Lambda),
/// temperature 1/(2 pi l), entropy pi l^2.
struct DeSitterPhase {
  double lambda = 0.0;
  double horizon_length = 0.0;
  double temperature = 0.0;
  double entropy = 0.0;
};

DeSitterPhase de_sitter_from_lambda(double lambda);
DeSitterPhase de_sitter_from_horizon(double horizon_length);
DeSitterPhase de_sitter_from_temperature(double temperature);
DeSitterPhase de_sitter_from_entropy(double entropy);

struct ReinflationParams {
  double lambda0 = 0.0;  // high phase
  double lambda1 = 0.0;  // low phase
  double c = 1.0;        // O(1) seed-radius constant

  void validate() const;
  DeSitterPhase high() const { return de_sitter_from_lambda(lambda0); }
  DeSitterPhase low() const { return de_sitter_from_lambda(lambda1); }
};

struct FluctuationSpec {
  double delta_e = 0.0;  // assembled energy
  double delta_s = 0.0;  // entropy deficit S_max - S
};

/// Energy of a reinflating seed of radius C*l0: l^3 Lambda0 = 3 C^3 l0.
/// The two forms are evaluated independently and cross-checked.
double reinflation_energy(const ReinflationParams& p);

/// ln of the seed-fluctuation probability: -6 pi C^3 l0 l1 - pi l0^2.
/// Stays in log space; the entropy form -6 C^3 sqrt(S0 S1) - S0 is
/// cross-checked to relative 1e-12.
double reinflation_log_probability(const ReinflationParams& p);

struct RecurrenceTime {
  double log_time = 0.0;   // ln tau_1
  double prefactor = 0.0;  // 4 pi^2 l1
};

/// ln tau_1 = ln(4 pi^2 l1) - reinflation_log_probability.
RecurrenceTime recurrence_log_time(const ReinflationParams& p);

/// ln of the thermal probability of any fluctuation: -dE/T1 - dS.
double fluctuation_log_probability(const FluctuationSpec& spec, double temperature);

struct BrainComparison {
  double log_odds = 0.0;  // reinflation log p - brain log p
  bool ordinary_brains_dominate = false;
  double seed_energy = 0.0;            // 3 C^3 l0
  bool brain_energy_exceeds_seed = false;
  double prose_threshold = 0.0;        // the looser ~l0 threshold
  bool brain_energy_exceeds_prose = false;
};

BrainComparison compare_boltzmann_brain(const ReinflationParams& p,
                                        const FluctuationSpec& brain);

}  // namespace decohist::cosmo
