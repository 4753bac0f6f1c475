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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "decohist/schedule_io.hpp"

namespace decohist::runners {

/// Named tolerance overrides, echoed into every artifact.
struct RunTolerances {
  double epsilon = 1e-6;   // decoherence criterion
  double floor = 1e-12;    // diagonal floor
  double prune = 1e-12;    // streaming branch prune

  Json to_json() const;
  void apply_override(const std::string& key, double value);
};

Json oscillator_phase(int levels, int steps, std::uint64_t seed, const RunTolerances& tol);
Json oscillator_energy(int levels, int events, std::uint64_t seed, const RunTolerances& tol);
Json mixed_coherence(int levels, int steps, const RunTolerances& tol);

Json functional_from_file(const Json& schedule_json, const RunTolerances& tol);
Json ts_functional_from_file(const Json& schedule_json, const RunTolerances& tol);

Json lindblad_propagate(const Json& model_json, const std::optional<Json>& state_json,
                        double t);
Json jump_ensemble(const Json& model_json, const std::optional<Json>& state_json, double dt,
                   double horizon, int trajectories, std::uint64_t seed, bool exact_oracle);
Json povm_step_order(const Json& model_json, const std::optional<Json>& state_json,
                     std::vector<double> dts);
Json relaxation(const Json& model_json, double spacing, int events, std::uint64_t seed);

Json cosmo_run(double lambda0, double lambda1_lo, double lambda1_hi, int sweep_steps,
               double c, std::optional<double> brain_de, std::optional<double> brain_ds);

Json random_histories(int dim, int events, const std::vector<int>& ranks, int samples,
                      std::uint64_t seed);

/// CSV projection of row-oriented artifacts ("rows" + "columns" keys).
std::string rows_to_csv(const Json& artifact);

}  // namespace decohist::runners
