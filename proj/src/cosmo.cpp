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

#include "decohist/cosmo.hpp"

#include <cmath>
#include <string>

namespace decohist::cosmo {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

void require_positive(double v, const char* what) {
  if (!(v > 0.0))
    throw std::invalid_argument(std::string(what) + " must be positive");
}

DeSitterPhase from_horizon(double l) {
  DeSitterPhase p;
  p.horizon_length = l;
  p.lambda = 3.0 / (l * l);
  p.temperature = 1.0 / (2.0 * kPi * l);
  p.entropy = kPi * l * l;
  return p;
}

}  // namespace

DeSitterPhase de_sitter_from_lambda(double lambda) {
  require_positive(lambda, "lambda");
  return from_horizon(std::sqrt(3.0 / lambda));
}

DeSitterPhase de_sitter_from_horizon(double horizon_length) {
  require_positive(horizon_length, "horizon length");
  return from_horizon(horizon_length);
}

DeSitterPhase de_sitter_from_temperature(double temperature) {
  require_positive(temperature, "temperature");
  return from_horizon(1.0 / (2.0 * kPi * temperature));
}

DeSitterPhase de_sitter_from_entropy(double entropy) {
  require_positive(entropy, "entropy");
  return from_horizon(std::sqrt(entropy / kPi));
}

void ReinflationParams::validate() const {
  require_positive(lambda1, "lambda1");
  require_positive(c, "C");
  if (!(lambda0 >= lambda1))
    throw std::invalid_argument("reinflation params: need lambda0 >= lambda1 > 0");
}

double reinflation_energy(const ReinflationParams& p) {
  p.validate();
  const double l0 = p.high().horizon_length;
  const double c3 = p.c * p.c * p.c;
  const double direct = 3.0 * c3 * l0;
  const double seed_radius = p.c * l0;
  const double from_density = seed_radius * seed_radius * seed_radius * p.lambda0;
  if (std::abs(direct - from_density) > 1e-12 * std::abs(direct))
    throw std::logic_error("reinflation_energy: cross-form identity failed");
  return direct;
}

double reinflation_log_probability(const ReinflationParams& p) {
  p.validate();
  const auto high = p.high();
  const auto low = p.low();
  const double c3 = p.c * p.c * p.c;
  const double log_p =
      -6.0 * kPi * c3 * high.horizon_length * low.horizon_length - high.entropy;
  const double entropy_form = -6.0 * c3 * std::sqrt(high.entropy * low.entropy) - high.entropy;
  if (std::abs(log_p - entropy_form) > 1e-12 * std::abs(log_p))
    throw std::logic_error("reinflation_log_probability: cross-form identity failed");
  return log_p;
}

RecurrenceTime recurrence_log_time(const ReinflationParams& p) {
  RecurrenceTime t;
  t.prefactor = 4.0 * kPi * kPi * p.low().horizon_length;
  t.log_time = std::log(t.prefactor) - reinflation_log_probability(p);
  return t;
}

double fluctuation_log_probability(const FluctuationSpec& spec, double temperature) {
  require_positive(temperature, "temperature");
  if (spec.delta_e < 0.0 || spec.delta_s < 0.0)
    throw std::invalid_argument("fluctuation spec: dE and dS must be non-negative");
  return -spec.delta_e / temperature - spec.delta_s;
}

BrainComparison compare_boltzmann_brain(const ReinflationParams& p,
                                        const FluctuationSpec& brain) {
  BrainComparison cmp;
  const double brain_log_p = fluctuation_log_probability(brain, p.low().temperature);
  cmp.log_odds = reinflation_log_probability(p) - brain_log_p;
  cmp.ordinary_brains_dominate = cmp.log_odds > 0.0;
  cmp.seed_energy = reinflation_energy(p);
  cmp.brain_energy_exceeds_seed = brain.delta_e > cmp.seed_energy;
  cmp.prose_threshold = p.high().horizon_length;
  cmp.brain_energy_exceeds_prose = brain.delta_e > cmp.prose_threshold;
  return cmp;
}

}  // namespace decohist::cosmo
