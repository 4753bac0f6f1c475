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

namespace decohist {

struct LindbladChannel {
  Mat op;       // L_j
  double rate;  // gamma_j >= 0
};

struct LindbladModel {
  Mat hamiltonian;
  std::vector<LindbladChannel> channels;

  Eigen::Index dim() const { return hamiltonian.rows(); }
  static LindbladModel checked(Mat hamiltonian, std::vector<LindbladChannel> channels,
                               double tol = 1e-10);
};

/// -i[H, rho] - sum_j (gamma_j/2)(L^dag L rho - 2 L rho L^dag + rho L^dag L)
Mat lindblad_rhs(const LindbladModel& model, const Mat& rho);

/// The d^2 x d^2 generator acting on column-stacked operators.
Mat liouvillian(const LindbladModel& model);

/// exp(t * liouvillian) as a superoperator matrix.
Mat channel_superop(const LindbladModel& model, double t);

/// Apply a superoperator matrix to an operator (column-stacking convention).
Mat apply_superop(const Mat& superop, const Mat& x);

/// Exact evolution through the superoperator exponential for small
/// dimensions, adaptive-stepped RK4 above the cutoff.
Mat propagate(const LindbladModel& model, const Mat& rho, double t);

/// Dimension cutoff between the exponential and RK4 paths of propagate().
inline constexpr Eigen::Index kSuperopExpDimLimit = 32;

struct PovmStepResult {
  int outcome = 0;  // 1 = jump branch
  Mat state;
  double p1 = 0.0;
};

/// One measurement+feedback step for a single-channel model with H = 0:
/// POVM {A^2 gamma dt, 1 - A^2 gamma dt} from the polar parts of L,
/// followed by the unitary polar factor on the jump branch.
PovmStepResult povm_feedback_step(const LindbladModel& model, const Mat& rho, double dt,
                                  double random_draw);

/// Outcome-averaged one-step map for the full model (all channels plus the
/// Hamiltonian); agrees with propagate() to O(dt^2).
Mat averaged_step(const LindbladModel& model, const Mat& rho, double dt);

/// Projective realization of the POVM {A^2 g, 1 - A^2 g} on system + qubit
/// ancilla: P_k = W^dag (I (x) |k><k|) W with W the dilation unitary and
/// the ancilla prepared in sigma = |0><0|.
struct Dilation {
  Eigen::Index sys_dim = 0;
  Mat sigma;  // 2x2 ancilla state
  Mat p0;     // projectors on system (x) ancilla, p0 + p1 = I
  Mat p1;
  Mat w;      // dilation unitary
};

Dilation dilate_to_projection(const Mat& a, double gamma_dt);

struct DilationBranch {
  double prob = 0.0;
  Mat state;  // reduced system state
};

/// Branch statistics of the dilated projective measurement.
DilationBranch dilation_branch(const Dilation& dil, const Mat& rho, int outcome);

struct JumpEvent {
  double time = 0.0;
  int channel = 0;
};

struct Trajectory {
  std::uint64_t seed = 0;
  std::vector<double> sample_times;
  std::vector<Mat> states;
  std::vector<JumpEvent> jumps;
};

/// First-order jump unraveling: per step, channel j fires with probability
/// gamma_j tr(L_j rho L_j^dag) dt, otherwise the no-jump contraction is
/// applied; Hamiltonian evolution acts within every step.
Trajectory jump_unravel(const LindbladModel& model, const Mat& rho0, double horizon,
                        double dt, std::uint64_t seed,
                        std::vector<double> sample_times = {});

struct EnsembleReport {
  Mat mean_state;
  double trace_distance_to_exact = -1.0;  // -1 when the oracle is off
  double statistical_error = 0.0;         // sd of trajectory spread / sqrt(M)
  std::size_t trajectories = 0;
  double dt = 0.0;                        // bias is O(dt)
};

EnsembleReport ensemble_average(const LindbladModel& model, const Mat& rho0, double horizon,
                                double dt, std::size_t n_trajectories,
                                std::uint64_t master_seed, bool exact_oracle = true);

/// Truncated ladder operator on N levels.
Mat lowering_operator(int levels);

/// Eq.-of-motion for an oscillator coupled to a thermal bath: channels
/// (a^dag, gamma_plus) and (a, gamma_minus) with gamma_plus/gamma_minus =
/// exp(-beta*omega), H = omega a^dag a.
LindbladModel thermal_oscillator_model(int levels, double omega, double beta,
                                       double gamma_minus);

struct RelaxationReport {
  double tau = 0.0;      // 1 / spectral gap
  double spacing = 0.0;  // s
  double s_over_tau = 0.0;
  double max_ratio = 0.0;
  Mat fixed_point;
  // Per event: measured marginal vs tr(P_a rho0).
  std::vector<std::vector<double>> event_marginals;
  std::vector<std::vector<double>> fixed_point_probs;
};

/// History functional with Lindblad channels between events, evaluated in
/// the channel-composition form; events all start from the model's unique
/// fixed point.
RelaxationReport relaxation_decoherence_experiment(const LindbladModel& model,
                                                   const std::vector<ProjectorFamily>& families,
                                                   double spacing);

}  // namespace decohist
