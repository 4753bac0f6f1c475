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

#include <doctest.h>

#include <cmath>

#include "decohist/oscillator.hpp"

using namespace decohist;

namespace {

Vec ket(Eigen::Index d, Eigen::Index i) {
  Vec v = Vec::Zero(d);
  v(i) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("N=2 phase states are the +/- superpositions") {
  TruncatedOscillator osc(2, 1.0);
  const auto basis = phase_states(osc);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(basis.states[0](0) - s) < 1e-14);
  CHECK(std::abs(basis.states[0](1) - s) < 1e-14);
  CHECK(std::abs(basis.states[1](0) - s) < 1e-14);
  CHECK(std::abs(basis.states[1](1) + s) < 1e-14);
}

TEST_CASE("phase states are orthonormal for all suite sizes") {
  for (int n : {2, 4, 8, 16}) {
    TruncatedOscillator osc(n, 0.7);
    const auto basis = phase_states(osc);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Complex ov = basis.states[j].dot(basis.states[k]);
        CHECK(std::abs(ov - (j == k ? 1.0 : 0.0)) < 1e-10);
      }
  }
}

TEST_CASE("step unitary cyclically shifts the phase index down by one") {
  for (int n : {2, 3, 4, 8}) {
    TruncatedOscillator osc(n, 1.3);
    const auto basis = phase_states(osc);
    const Mat u = step_unitary(osc);
    CHECK((u.adjoint() * u - Mat::Identity(n, n)).norm() < 1e-10);
    for (int j = 0; j < n; ++j) {
      const int target = ((j - 1) % n + n) % n;
      const Complex amp = basis.states[target].dot(u * basis.states[j]);
      CHECK(std::abs(std::abs(amp) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("a full revolution is proportional to the identity") {
  TruncatedOscillator osc(5, 2.0);
  Mat u = Mat::Identity(5, 5);
  const Mat step = step_unitary(osc);
  for (int k = 0; k < 5; ++k) u = step * u;
  // Proportional to the identity: divide out the first phase.
  const Mat scaled = u / u(0, 0);
  CHECK((scaled - Mat::Identity(5, 5)).norm() < 1e-10);
}

TEST_CASE("energy eigenstates acquire only a phase") {
  TruncatedOscillator osc(4, 1.0);
  const Mat u = step_unitary(osc);
  for (int l = 0; l < 4; ++l) CHECK(std::abs(std::abs(u(l, l)) - 1.0) < 1e-12);
}

TEST_CASE("N=2 two-step phase histories from the ground state") {
  TruncatedOscillator osc(2, 1.0);
  const auto schedule = phase_history_schedule(osc, 2);
  const auto d = decoherence_functional(schedule, pure_density(ket(2, 0)));
  const auto probs = history_probabilities(d);
  CHECK(probs.at({0, 1}) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(probs.at({1, 0}) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(probs.at({0, 0}) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(probs.at({1, 1}) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("phase histories decohere and follow successor chains") {
  TruncatedOscillator osc(4, 1.0);
  const auto schedule = phase_history_schedule(osc, 3);
  const auto d = decoherence_functional(schedule, pure_density(ket(4, 0)));
  double first_marginal[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < d.labels.size(); ++i) {
    for (std::size_t j = 0; j < d.labels.size(); ++j)
      if (i != j) CHECK(std::abs(d.matrix(i, j)) < 1e-10);
    const double p = d.matrix(i, i).real();
    if (p > 1e-10) {
      // Support only on descending chains (the implementation's direction).
      for (std::size_t k = 1; k < d.labels[i].size(); ++k)
        CHECK(((d.labels[i][k - 1] - d.labels[i][k]) % 4 + 4) % 4 == 1);
    }
    first_marginal[d.labels[i][0]] += p;
  }
  for (int j = 0; j < 4; ++j)
    CHECK(first_marginal[j] == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("energy histories are diagonal for any initial state") {
  TruncatedOscillator osc(4, 1.0);
  const auto schedule = energy_history_schedule(osc, {0.2, 1.1});
  Vec psi(4);
  psi << 0.5, 0.5, 0.5, Complex(0.0, 0.5);
  const auto d = decoherence_functional(schedule, pure_density(psi));
  for (std::size_t i = 0; i < d.labels.size(); ++i)
    for (std::size_t j = 0; j < d.labels.size(); ++j)
      if (i != j) CHECK(std::abs(d.matrix(i, j)) < 1e-10);
}

TEST_CASE("mixed-basis coherence demo: coherent histories, deterministic control") {
  for (int n : {2, 8}) {
    TruncatedOscillator osc(n, 1.0);
    const auto rep = mixed_basis_coherence_demo(osc, n == 2 ? 1 : 3);
    CHECK(rep.all_ratios_one);
    CHECK(rep.ground_to_ground.max_ratio == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rep.deterministic_max_ratio < 1e-6);
  }
}

TEST_CASE("oscillator parameter validation") {
  CHECK_THROWS_AS(TruncatedOscillator(1, 1.0), ValidationError);
  CHECK_THROWS_AS(TruncatedOscillator(4, 0.0), ValidationError);
}
