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

#include "decohist/openquantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "decohist/rng.hpp"

namespace decohist {

LindbladModel LindbladModel::checked(Mat hamiltonian, std::vector<LindbladChannel> channels,
                                     double tol) {
  require_square(hamiltonian, "lindblad model");
  require_finite(hamiltonian, "lindblad model");
  if (!is_hermitian(hamiltonian, tol))
    throw ValidationError("lindblad model: Hamiltonian not Hermitian");
  for (const auto& c : channels) {
    require_square(c.op, "lindblad channel");
    require_finite(c.op, "lindblad channel");
    if (c.op.rows() != hamiltonian.rows())
      throw DimensionError("lindblad channel: dimension mismatch");
    if (c.rate < 0.0) throw ValidationError("lindblad channel: negative rate");
  }
  return LindbladModel{std::move(hamiltonian), std::move(channels)};
}

Mat lindblad_rhs(const LindbladModel& model, const Mat& rho) {
  require_same_dim(model.hamiltonian, rho, "lindblad_rhs");
  Mat out = Complex(0.0, -1.0) * (model.hamiltonian * rho - rho * model.hamiltonian);
  for (const auto& c : model.channels) {
    const Mat ldl = c.op.adjoint() * c.op;
    out -= (c.rate / 2.0) * (ldl * rho - 2.0 * c.op * rho * c.op.adjoint() + rho * ldl);
  }
  return out;
}

Mat liouvillian(const LindbladModel& model) {
  const Eigen::Index d = model.dim();
  const Mat id = Mat::Identity(d, d);
  // Column-stacking: vec(A X B) = (B^T (x) A) vec(X).
  Mat sup = Complex(0.0, -1.0) * (tensor_product(id, model.hamiltonian) -
                                  tensor_product(model.hamiltonian.transpose(), id));
  for (const auto& c : model.channels) {
    const Mat ldl = c.op.adjoint() * c.op;
    sup += c.rate * (tensor_product(c.op.conjugate(), c.op) -
                     0.5 * tensor_product(id, ldl) -
                     0.5 * tensor_product(ldl.transpose(), id));
  }
  return sup;
}

Mat channel_superop(const LindbladModel& model, double t) {
  return matrix_exponential(liouvillian(model), t, ExpMode::Raw);
}

Mat apply_superop(const Mat& superop, const Mat& x) {
  const Eigen::Index d = x.rows();
  if (superop.rows() != d * d)
    throw DimensionError("apply_superop: dimension mismatch");
  Eigen::Map<const Vec> vx(x.data(), d * d);
  Vec vy = superop * vx;
  return Eigen::Map<const Mat>(vy.data(), d, d);
}

namespace {

Mat rk4_propagate(const LindbladModel& model, Mat rho, double t) {
  // Step size tied to the fastest rate in the generator.
  double scale = model.hamiltonian.cwiseAbs().maxCoeff();
  for (const auto& c : model.channels)
    scale += c.rate * c.op.squaredNorm();
  const int steps = std::max(200, static_cast<int>(std::ceil(50.0 * t * std::max(scale, 1e-12))));
  const double h = t / steps;
  for (int k = 0; k < steps; ++k) {
    const Mat k1 = lindblad_rhs(model, rho);
    const Mat k2 = lindblad_rhs(model, rho + 0.5 * h * k1);
    const Mat k3 = lindblad_rhs(model, rho + 0.5 * h * k2);
    const Mat k4 = lindblad_rhs(model, rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

}  // namespace

Mat propagate(const LindbladModel& model, const Mat& rho, double t) {
  if (t < 0.0) throw ValidationError("propagate: negative time");
  require_same_dim(model.hamiltonian, rho, "propagate");
  check_density_matrix(rho, 1e-8);
  if (t == 0.0) return rho;
  Mat out;
  if (model.dim() <= kSuperopExpDimLimit) {
    out = apply_superop(channel_superop(model, t), rho);
  } else {
    out = rk4_propagate(model, rho, t);
  }
  // restore exact Hermiticity lost to rounding
  out = 0.5 * (out + out.adjoint().eval());
  return out;
}

PovmStepResult povm_feedback_step(const LindbladModel& model, const Mat& rho, double dt,
                                  double random_draw) {
  if (model.channels.size() != 1)
    throw ValidationError("povm_feedback_step: single-channel models only");
  const auto& ch = model.channels.front();
  const double g = ch.rate * dt;
  const auto polar = polar_decompose(ch.op);
  const Mat a2 = polar.positive * polar.positive;

  Eigen::SelfAdjointEigenSolver<Mat> es(a2, Eigen::EigenvaluesOnly);
  if (g * es.eigenvalues().maxCoeff() > 1.0)
    throw ValidationError("povm_feedback_step: dt too large, 1 - A^2 gamma dt not PSD");

  PovmStepResult res;
  res.p1 = std::min(std::max(g * (a2 * rho).trace().real(), 0.0), 1.0);
  if (random_draw < res.p1) {
    res.outcome = 1;
    const Mat jumped = ch.op * rho * ch.op.adjoint();
    res.state = jumped / jumped.trace().real();
  } else {
    res.outcome = 0;
    const Mat s = hermitian_sqrt(Mat::Identity(rho.rows(), rho.cols()) - g * a2);
    const Mat kept = s * rho * s;
    res.state = kept / kept.trace().real();
  }
  return res;
}

Mat averaged_step(const LindbladModel& model, const Mat& rho, double dt) {
  const Eigen::Index d = model.dim();
  Mat decay = Mat::Zero(d, d);
  for (const auto& c : model.channels) decay += c.rate * dt * (c.op.adjoint() * c.op);
  Eigen::SelfAdjointEigenSolver<Mat> es(decay, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().maxCoeff() > 1.0)
    throw ValidationError("averaged_step: dt too large for the no-jump contraction");
  const Mat s = hermitian_sqrt(Mat::Identity(d, d) - decay);
  Mat out = s * rho * s;
  for (const auto& c : model.channels)
    out += c.rate * dt * (c.op * rho * c.op.adjoint());
  const Mat u = matrix_exponential(model.hamiltonian, dt, ExpMode::Propagator);
  return u * out * u.adjoint();
}

Dilation dilate_to_projection(const Mat& a, double gamma_dt) {
  require_square(a, "dilate_to_projection");
  if (!is_hermitian(a, 1e-8))
    throw ValidationError("dilate_to_projection: A must be Hermitian");
  const Eigen::Index d = a.rows();
  const Mat m1 = gamma_dt * (a * a);
  Eigen::SelfAdjointEigenSolver<Mat> es(m1, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10 || es.eigenvalues().maxCoeff() > 1.0 + 1e-10)
    throw ValidationError("dilate_to_projection: POVM element out of [0, 1]");

  const Mat r1 = hermitian_sqrt(m1);
  const Mat r0 = hermitian_sqrt(Mat::Identity(d, d) - m1);

  // W = [[r0, -r1], [r1, r0]] in ancilla blocks; unitary because r0, r1
  // commute and r0^2 + r1^2 = I.
  Mat w = Mat::Zero(2 * d, 2 * d);
  w.block(0, 0, d, d) = r0;
  w.block(0, d, d, d) = -r1;
  w.block(d, 0, d, d) = r1;
  w.block(d, d, d, d) = r0;

  Dilation dil;
  dil.sys_dim = d;
  dil.sigma = Mat::Zero(2, 2);
  dil.sigma(0, 0) = 1.0;
  Mat pi1 = Mat::Zero(2 * d, 2 * d);
  pi1.block(d, d, d, d) = Mat::Identity(d, d);
  dil.p1 = w.adjoint() * pi1 * w;
  dil.p0 = Mat::Identity(2 * d, 2 * d) - dil.p1;
  dil.w = std::move(w);
  return dil;
}

DilationBranch dilation_branch(const Dilation& dil, const Mat& rho, int outcome) {
  const Eigen::Index d = dil.sys_dim;
  // Tensor layout: ancilla (x) system, so the W blocks above act directly.
  const Mat joint = tensor_product(dil.sigma, rho);
  const Mat& p = (outcome == 1) ? dil.p1 : dil.p0;
  const Mat projected = p * joint * p;
  DilationBranch br;
  br.prob = projected.trace().real();
  if (br.prob > 1e-300) {
    const Mat rotated = dil.w * projected * dil.w.adjoint();
    br.state = partial_trace(rotated, 2, d, Factor::First) / br.prob;
  } else {
    br.state = Mat::Zero(d, d);
  }
  return br;
}

Trajectory jump_unravel(const LindbladModel& model, const Mat& rho0, double horizon,
                        double dt, std::uint64_t seed, std::vector<double> sample_times) {
  if (dt <= 0.0 || horizon < 0.0)
    throw ValidationError("jump_unravel: need dt > 0 and horizon >= 0");
  const double steps_exact = horizon / dt;
  const long steps = std::lround(steps_exact);
  if (std::abs(steps_exact - steps) > 1e-6)
    throw ValidationError("jump_unravel: horizon must be a multiple of dt");
  check_density_matrix(rho0, 1e-8);

  const Eigen::Index d = model.dim();
  Mat decay = Mat::Zero(d, d);
  for (const auto& c : model.channels) decay += c.rate * dt * (c.op.adjoint() * c.op);
  Eigen::SelfAdjointEigenSolver<Mat> es(decay, Eigen::EigenvaluesOnly);
  if (!model.channels.empty() && es.eigenvalues().maxCoeff() > 1.0)
    throw ValidationError("jump_unravel: dt too large for the no-jump contraction");
  const Mat nojump = hermitian_sqrt(Mat::Identity(d, d) - decay);
  const Mat u = matrix_exponential(model.hamiltonian, dt, ExpMode::Propagator);

  if (sample_times.empty()) sample_times = {horizon};

  Trajectory traj;
  traj.seed = seed;
  traj.sample_times = sample_times;
  CounterRng rng(seed);
  Mat rho = rho0;
  std::size_t next_sample = 0;
  auto record_through = [&](double t_now) {
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t_now + 0.5 * dt) {
      traj.states.push_back(rho);
      ++next_sample;
    }
  };
  record_through(0.0);
  for (long k = 0; k < steps; ++k) {
    const double u01 = rng.next_double();
    double acc = 0.0;
    int fired = -1;
    for (std::size_t j = 0; j < model.channels.size(); ++j) {
      const auto& c = model.channels[j];
      acc += c.rate * dt * (c.op * rho * c.op.adjoint()).trace().real();
      if (u01 < acc) {
        fired = static_cast<int>(j);
        break;
      }
    }
    if (fired >= 0) {
      const auto& c = model.channels[fired];
      const Mat jumped = c.op * rho * c.op.adjoint();
      rho = jumped / jumped.trace().real();
      traj.jumps.push_back({(k + 1) * dt, fired});
    } else {
      const Mat kept = nojump * rho * nojump;
      rho = kept / kept.trace().real();
    }
    rho = u * rho * u.adjoint();
    record_through((k + 1) * dt);
  }
  record_through(horizon + dt);
  return traj;
}

EnsembleReport ensemble_average(const LindbladModel& model, const Mat& rho0, double horizon,
                                double dt, std::size_t n_trajectories,
                                std::uint64_t master_seed, bool exact_oracle) {
  if (n_trajectories < 1)
    throw ValidationError("ensemble_average: need at least one trajectory");
  const Eigen::Index d = model.dim();
  std::vector<Mat> finals;
  finals.reserve(n_trajectories);
  Mat sum = Mat::Zero(d, d);
  for (std::size_t k = 0; k < n_trajectories; ++k) {
    const auto traj = jump_unravel(model, rho0, horizon, dt,
                                   CounterRng::derive(master_seed, k));
    finals.push_back(traj.states.back());
    sum += finals.back();
  }
  EnsembleReport rep;
  rep.trajectories = n_trajectories;
  rep.dt = dt;
  rep.mean_state = sum / static_cast<double>(n_trajectories);
  double var = 0.0;
  for (const Mat& f : finals) {
    const double dev = trace_distance(f, rep.mean_state);
    var += dev * dev;
  }
  rep.statistical_error =
      std::sqrt(var / static_cast<double>(n_trajectories)) / std::sqrt(static_cast<double>(n_trajectories));
  if (exact_oracle)
    rep.trace_distance_to_exact = trace_distance(rep.mean_state, propagate(model, rho0, horizon));
  return rep;
}

Mat lowering_operator(int levels) {
  Mat a = Mat::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

LindbladModel thermal_oscillator_model(int levels, double omega, double beta,
                                       double gamma_minus) {
  if (levels < 2) throw ValidationError("thermal_oscillator_model: need at least two levels");
  if (beta <= 0.0 || gamma_minus <= 0.0)
    throw ValidationError("thermal_oscillator_model: beta and gamma_minus must be positive");
  const Mat a = lowering_operator(levels);
  const double gamma_plus = gamma_minus * std::exp(-beta * omega);
  Mat h = omega * (a.adjoint() * a);
  return LindbladModel::checked(std::move(h),
                                {{a.adjoint(), gamma_plus}, {a, gamma_minus}});
}

RelaxationReport relaxation_decoherence_experiment(const LindbladModel& model,
                                                   const std::vector<ProjectorFamily>& families,
                                                   double spacing) {
  if (families.empty())
    throw ValidationError("relaxation experiment: need at least one event");
  const Eigen::Index d = model.dim();
  for (const auto& f : families)
    if (f.dim() != d) throw DimensionError("relaxation experiment: family dimension mismatch");

  const Mat sup = liouvillian(model);
  Eigen::ComplexEigenSolver<Mat> es(sup);
  const double scale = std::max(1.0, sup.cwiseAbs().maxCoeff());
  int zero_count = 0;
  Eigen::Index zero_idx = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex ev = es.eigenvalues()(i);
    if (std::abs(ev) < 1e-9 * scale) {
      ++zero_count;
      zero_idx = i;
    } else {
      gap = std::min(gap, -ev.real());
    }
  }
  if (zero_count != 1)
    throw ValidationError("relaxation experiment: fixed point is degenerate");
  if (gap <= 0.0)
    throw ValidationError("relaxation experiment: generator has non-decaying modes");

  Vec v = es.eigenvectors().col(zero_idx);
  Mat rho0 = Eigen::Map<const Mat>(v.data(), d, d);
  rho0 = 0.5 * (rho0 + rho0.adjoint().eval());
  rho0 /= rho0.trace().real();

  RelaxationReport rep;
  rep.tau = 1.0 / gap;
  rep.spacing = spacing;
  rep.s_over_tau = spacing * gap;
  rep.fixed_point = rho0;

  const Mat chan = matrix_exponential(sup, spacing, ExpMode::Raw);

  // Enumerate label pairs; channel composition between events.
  std::vector<std::size_t> sizes;
  std::size_t n_labels = 1;
  for (const auto& f : families) {
    sizes.push_back(f.members.size());
    n_labels *= f.members.size();
  }
  auto label_of = [&](std::size_t idx) {
    std::vector<int> lab(sizes.size());
    for (std::size_t k = sizes.size(); k-- > 0;) {
      lab[k] = static_cast<int>(idx % sizes[k]);
      idx /= sizes[k];
    }
    return lab;
  };

  Mat dmat(n_labels, n_labels);
  for (std::size_t i = 0; i < n_labels; ++i) {
    const auto la = label_of(i);
    for (std::size_t j = 0; j <= i; ++j) {
      const auto lb = label_of(j);
      Mat x = families[0].members[la[0]] * rho0 * families[0].members[lb[0]];
      for (std::size_t k = 1; k < families.size(); ++k) {
        x = apply_superop(chan, x);
        x = families[k].members[la[k]] * x * families[k].members[lb[k]];
      }
      dmat(i, j) = x.trace();
      dmat(j, i) = std::conj(dmat(i, j));
    }
  }

  for (std::size_t i = 0; i < n_labels; ++i) {
    for (std::size_t j = i + 1; j < n_labels; ++j) {
      const double pi = dmat(i, i).real();
      const double pj = dmat(j, j).real();
      if (pi < 1e-12 || pj < 1e-12) continue;
      rep.max_ratio = std::max(rep.max_ratio, std::norm(dmat(i, j)) / (pi * pj));
    }
  }

  rep.event_marginals.assign(families.size(), {});
  rep.fixed_point_probs.assign(families.size(), {});
  for (std::size_t k = 0; k < families.size(); ++k) {
    rep.event_marginals[k].assign(sizes[k], 0.0);
    for (std::size_t i = 0; i < n_labels; ++i)
      rep.event_marginals[k][label_of(i)[k]] += std::max(dmat(i, i).real(), 0.0);
    for (const Mat& p : families[k].members)
      rep.fixed_point_probs[k].push_back((p * rho0).trace().real());
  }
  return rep;
}

}  // namespace decohist
