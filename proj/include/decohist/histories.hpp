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

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "decohist/qops.hpp"

namespace decohist {

using Label = std::vector<int>;

enum class FamilyKind { Projective, Kraus };

struct Event {
  double time = 0.0;
  std::vector<Mat> family;
  FamilyKind kind = FamilyKind::Projective;
};

/// Unitary for the gap ending at event `gap_index`, possibly depending on
/// the outcome prefix alpha_1..alpha_{gap_index} recorded so far.
using BranchPropagatorRule =
    std::function<Mat(const Label& prefix, int gap_index, double t_from, double t_to)>;

/// Ordered event schedule plus the rule producing inter-event propagators.
class EventSchedule {
 public:
  static EventSchedule with_hamiltonian(Eigen::Index dim, std::vector<Event> events,
                                        Mat hamiltonian, double initial_time,
                                        std::optional<double> final_time = std::nullopt);
  /// gap_unitaries[k] is applied between event k and event k+1 (no leading
  /// or trailing evolution).
  static EventSchedule with_unitaries(Eigen::Index dim, std::vector<Event> events,
                                      std::vector<Mat> gap_unitaries);
  static EventSchedule with_branch_rule(Eigen::Index dim, std::vector<Event> events,
                                        BranchPropagatorRule rule, double initial_time,
                                        std::optional<double> final_time = std::nullopt);

  Eigen::Index dim() const { return dim_; }
  const std::vector<Event>& events() const { return events_; }
  std::size_t n_events() const { return events_.size(); }
  bool projective() const;
  bool branch_dependent() const { return static_cast<bool>(rule_); }
  std::size_t label_count() const;

  /// Unitary preceding event k (k = 0 covers initial time -> t_0; identity
  /// in explicit-unitaries mode).  `prefix` holds outcomes alpha_1..alpha_k.
  Mat gap_unitary(std::size_t k, const Label& prefix) const;
  /// Trailing evolution t_n -> final time (identity unless a Hamiltonian
  /// rule and a final time were given).
  Mat final_unitary(const Label& full_label) const;

  std::vector<Label> enumerate_labels() const;

 private:
  EventSchedule() = default;
  void validate() const;

  Eigen::Index dim_ = 0;
  std::vector<Event> events_;
  std::optional<Mat> hamiltonian_;
  std::vector<Mat> gap_unitaries_;
  BranchPropagatorRule rule_;
  double initial_time_ = 0.0;
  std::optional<double> final_time_;
};

/// Chain operator C_alpha = P^n U ... U P^1 U_lead for one history label.
Mat class_operator(const EventSchedule& schedule, const Label& label);

/// One surviving branch B_alpha = C_alpha * sqrt(rho_i); entries of the
/// functional are Frobenius inner products of branches.
struct Branch {
  Label label;
  Mat op;
};

/// Depth-first branch expansion with optional pruning: branches whose
/// Frobenius norm drops to `prune_tol` or below are discarded.  Any entry
/// involving a pruned branch is bounded by prune_tol via Cauchy-Schwarz.
std::vector<Branch> branch_operators(const EventSchedule& schedule, const Mat& rho_sqrt,
                                     double prune_tol = 0.0);

struct DecoherenceFunctional {
  std::vector<Label> labels;
  Mat matrix;  // Hermitian, indexed by labels
  bool projective = true;
  bool time_symmetric = false;
  double normalization = 1.0;  // Z for the time-symmetric variant

  double diagonal(std::size_t i) const { return matrix(i, i).real(); }
};

/// Above this label count the functional is not materialized; use the
/// branch streaming interface instead.
inline constexpr std::size_t kMaterializationLimit = 4096;

DecoherenceFunctional decoherence_functional(const EventSchedule& schedule, const Mat& rho_i);

std::map<Label, double> history_probabilities(const DecoherenceFunctional& d);

/// Diagonals below this floor make the ratio undefined; such pairs are
/// pruned from the decoherence criterion.
inline constexpr double kDiagonalFloor = 1e-12;

std::optional<double> decoherence_ratio(const DecoherenceFunctional& d, std::size_t i,
                                        std::size_t j, double floor = kDiagonalFloor);

struct DecoherenceVerdict {
  bool decoherent = true;
  double max_ratio = 0.0;
  std::size_t worst_i = 0;
  std::size_t worst_j = 0;
};

DecoherenceVerdict is_decoherent(const DecoherenceFunctional& d, double epsilon,
                                 double floor = kDiagonalFloor);

/// |p(x, intermediates summed coherently) - sum over prefixes p(prefix, x)|
/// for outcome x of the final event.
double sum_rule_violation(const EventSchedule& schedule, const Mat& rho_i, int final_outcome);

DecoherenceFunctional time_symmetric_functional(const EventSchedule& schedule,
                                                const Mat& rho_i, const Mat& rho_f);

struct PairRatio {
  Label a;
  Label b;
  double ratio = 0.0;
};

struct PureEndpointReport {
  std::vector<PairRatio> defined_ratios;  // both diagonals above floor
  double max_ratio = 0.0;
  double min_ratio = 0.0;
};

/// Ratios for histories pinned to pure endpoints |psi> ... |phi><phi|.
PureEndpointReport pure_endpoint_ratio(const EventSchedule& schedule, const Vec& psi,
                                       const Vec& phi, double floor = kDiagonalFloor);

/// Streaming bound for schedules too large to materialize: maximum
/// off-diagonal |D| and max defined ratio over surviving branch pairs.
struct StreamedOffdiagStats {
  double max_abs_offdiag = 0.0;
  double max_ratio = 0.0;
  double pruned_bound = 0.0;  // Cauchy-Schwarz bound for pairs involving pruned branches
  std::vector<Branch> branches;
};

StreamedOffdiagStats streamed_offdiag_stats(const EventSchedule& schedule, const Mat& rho_i,
                                            double prune_tol,
                                            double floor = kDiagonalFloor);

}  // namespace decohist
