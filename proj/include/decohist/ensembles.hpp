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
#include <vector>

#include "decohist/qops.hpp"
#include "decohist/rng.hpp"

namespace decohist {

/// Haar-distributed unitary (Gaussian matrix, QR, R-phase fix).
Mat haar_unitary(Eigen::Index d, CounterRng& rng);

/// Projectors onto mutually orthogonal random subspaces of the given ranks
/// (columns of one Haar unitary).
ProjectorFamily sample_random_family(Eigen::Index d, const std::vector<int>& ranks,
                                     CounterRng& rng);

struct RandomScheduleSpec {
  Eigen::Index dim = 2;
  int n_events = 2;
  std::vector<int> ranks;  // rank partition, shared by every event
  int samples = 100;
  std::uint64_t seed = 0;
};

struct PairSample {
  std::size_t sample = 0;
  double p = 0.0;
  double p_prime = 0.0;
  double ratio = 0.0;
  bool same_final = false;
};

struct TypicalRatioReport {
  std::size_t samples = 0;
  // ratio * d * p * p' over all defined pairs (diagonal pairs included) and
  // over strictly off-diagonal pairs.
  double mean_scaled_all = 0.0;
  double mean_scaled_offdiag = 0.0;
  double median_scaled_offdiag = 0.0;
  double median_ratio_offdiag = 0.0;
  // Pairs differing before the final event only; pairs with different final
  // outcomes are exactly zero by orthogonality and would mask the statistic.
  double median_ratio_same_final = 0.0;
  // |<psi(a')|psi(a)>|^2 * d over off-diagonal pairs sharing the final outcome.
  double median_overlap_times_d = 0.0;
  std::size_t pairs_all = 0;
  std::size_t pairs_offdiag = 0;
  std::vector<PairSample> offdiag_pairs;
};

/// Random coarse-grained histories of a closed system with trivial
/// dynamics: per sample, one random family per event.
TypicalRatioReport typical_ratio_experiment(const RandomScheduleSpec& spec, const Vec& psi0);

struct CapacityPoint {
  int rank = 0;
  double event_scale = 0.0;     // rank / d
  double median_ratio = 0.0;
  double median_history_p = 0.0;
};

struct CapacityReport {
  std::vector<CapacityPoint> sweep;
  double threshold = 0.1;
  // Per-event probability scale where the median ratio crosses the
  // threshold (log-interpolated), and the sqrt(d) prediction.
  double crossing_scale = 0.0;
  double predicted_scale = 0.0;
  bool crossed = false;
};

/// Sweeps history fineness (equal-rank partitions, powers of two) and
/// locates where typical histories stop decohering.
CapacityReport information_capacity_check(Eigen::Index d, int n_events, int samples_per_rank,
                                          std::uint64_t seed, double threshold = 0.1);

}  // namespace decohist
