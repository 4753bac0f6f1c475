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

#include "decohist/histories.hpp"

#include <algorithm>

namespace decohist {

namespace {

Complex frobenius_inner(const Mat& a, const Mat& b) {
  // tr(a b^dag)
  return (a.array() * b.conjugate().array()).sum();
}

}  // namespace

EventSchedule EventSchedule::with_hamiltonian(Eigen::Index dim, std::vector<Event> events,
                                              Mat hamiltonian, double initial_time,
                                              std::optional<double> final_time) {
  EventSchedule s;
  s.dim_ = dim;
  s.events_ = std::move(events);
  require_square(hamiltonian, "schedule hamiltonian");
  if (hamiltonian.rows() != dim)
    throw DimensionError("schedule hamiltonian: dimension mismatch");
  if (!is_hermitian(hamiltonian, 1e-10))
    throw ValidationError("schedule hamiltonian: not Hermitian");
  s.hamiltonian_ = std::move(hamiltonian);
  s.initial_time_ = initial_time;
  s.final_time_ = final_time;
  s.validate();
  return s;
}

EventSchedule EventSchedule::with_unitaries(Eigen::Index dim, std::vector<Event> events,
                                            std::vector<Mat> gap_unitaries) {
  EventSchedule s;
  s.dim_ = dim;
  s.events_ = std::move(events);
  if (gap_unitaries.size() + 1 != s.events_.size())
    throw ValidationError("schedule: need exactly one unitary per inter-event gap");
  for (const Mat& u : gap_unitaries) {
    require_square(u, "gap unitary");
    if (u.rows() != dim) throw DimensionError("gap unitary: dimension mismatch");
    if ((u * u.adjoint() - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-8)
      throw ValidationError("gap unitary: not unitary");
  }
  s.gap_unitaries_ = std::move(gap_unitaries);
  s.initial_time_ = s.events_.empty() ? 0.0 : s.events_.front().time;
  s.validate();
  return s;
}

EventSchedule EventSchedule::with_branch_rule(Eigen::Index dim, std::vector<Event> events,
                                              BranchPropagatorRule rule, double initial_time,
                                              std::optional<double> final_time) {
  EventSchedule s;
  s.dim_ = dim;
  s.events_ = std::move(events);
  if (!rule) throw ValidationError("schedule: null branch propagator rule");
  s.rule_ = std::move(rule);
  s.initial_time_ = initial_time;
  s.final_time_ = final_time;
  s.validate();
  return s;
}

void EventSchedule::validate() const {
  if (events_.empty()) throw ValidationError("schedule: no events");
  double prev = initial_time_;
  bool first = true;
  for (const Event& e : events_) {
    if (!first && e.time <= prev)
      throw ValidationError("schedule: event times must be strictly increasing");
    if (first && e.time < prev)
      throw ValidationError("schedule: first event precedes the initial time");
    prev = e.time;
    first = false;
    if (e.kind == FamilyKind::Projective) {
      ProjectorFamily::checked(e.family);
    } else {
      KrausFamily::checked(e.family);
    }
    if (e.family.front().rows() != dim_)
      throw DimensionError("schedule: event family dimension mismatch");
  }
  if (final_time_ && *final_time_ < events_.back().time)
    throw ValidationError("schedule: final time precedes the last event");
}

bool EventSchedule::projective() const {
  return std::all_of(events_.begin(), events_.end(),
                     [](const Event& e) { return e.kind == FamilyKind::Projective; });
}

std::size_t EventSchedule::label_count() const {
  std::size_t n = 1;
  for (const Event& e : events_) n *= e.family.size();
  return n;
}

Mat EventSchedule::gap_unitary(std::size_t k, const Label& prefix) const {
  const double t_to = events_[k].time;
  const double t_from = (k == 0) ? initial_time_ : events_[k - 1].time;
  if (rule_) {
    Mat u = rule_(prefix, static_cast<int>(k), t_from, t_to);
    if (u.rows() != dim_ || u.cols() != dim_)
      throw ValidationError("branch propagator rule returned wrong dimension");
    return u;
  }
  if (hamiltonian_) {
    if (t_to == t_from) return Mat::Identity(dim_, dim_);
    return matrix_exponential(*hamiltonian_, t_to - t_from, ExpMode::Propagator);
  }
  if (k == 0) return Mat::Identity(dim_, dim_);
  return gap_unitaries_[k - 1];
}

Mat EventSchedule::final_unitary(const Label& full_label) const {
  if (!final_time_) return Mat::Identity(dim_, dim_);
  const double t_from = events_.back().time;
  if (rule_)
    return rule_(full_label, static_cast<int>(events_.size()), t_from, *final_time_);
  if (hamiltonian_)
    return matrix_exponential(*hamiltonian_, *final_time_ - t_from, ExpMode::Propagator);
  return Mat::Identity(dim_, dim_);
}

std::vector<Label> EventSchedule::enumerate_labels() const {
  std::vector<Label> out;
  out.reserve(label_count());
  Label cur;
  // depth-first, outcome index ascending: lexicographic order
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == events_.size()) {
      out.push_back(cur);
      return;
    }
    for (int a = 0; a < static_cast<int>(events_[k].family.size()); ++a) {
      cur.push_back(a);
      rec(k + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

Mat class_operator(const EventSchedule& schedule, const Label& label) {
  if (label.size() != schedule.n_events())
    throw ValidationError("class_operator: label length does not match event count");
  Label prefix;
  Mat c = Mat::Identity(schedule.dim(), schedule.dim());
  for (std::size_t k = 0; k < schedule.n_events(); ++k) {
    const Event& e = schedule.events()[k];
    const int a = label[k];
    if (a < 0 || a >= static_cast<int>(e.family.size()))
      throw ValidationError("class_operator: outcome index out of range");
    c = e.family[a] * (schedule.gap_unitary(k, prefix) * c);
    prefix.push_back(a);
  }
  return c;
}

std::vector<Branch> branch_operators(const EventSchedule& schedule, const Mat& rho_sqrt,
                                     double prune_tol) {
  if (rho_sqrt.rows() != schedule.dim())
    throw DimensionError("branch_operators: state dimension mismatch");
  std::vector<Branch> out;
  Label cur;
  std::function<void(std::size_t, const Mat&)> rec = [&](std::size_t k, const Mat& b) {
    if (k == schedule.n_events()) {
      out.push_back({cur, b});
      return;
    }
    const Mat evolved = schedule.gap_unitary(k, cur) * b;
    const Event& e = schedule.events()[k];
    for (int a = 0; a < static_cast<int>(e.family.size()); ++a) {
      Mat next = e.family[a] * evolved;
      if (prune_tol > 0.0 && next.norm() <= prune_tol) continue;
      cur.push_back(a);
      rec(k + 1, next);
      cur.pop_back();
    }
  };
  rec(0, rho_sqrt);
  return out;
}

namespace {

DecoherenceFunctional functional_from_branches(const EventSchedule& schedule,
                                               const std::vector<Branch>& branches,
                                               double z, bool time_symmetric) {
  DecoherenceFunctional d;
  d.projective = schedule.projective();
  d.time_symmetric = time_symmetric;
  d.normalization = z;
  const std::size_t n = branches.size();
  d.labels.reserve(n);
  for (const Branch& b : branches) d.labels.push_back(b.label);
  d.matrix = Mat(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const Complex v = frobenius_inner(branches[i].op, branches[j].op) / z;
      d.matrix(i, j) = v;
      d.matrix(j, i) = std::conj(v);
    }
    d.matrix(i, i) = Complex(d.matrix(i, i).real(), 0.0);
  }
  return d;
}

}  // namespace

DecoherenceFunctional decoherence_functional(const EventSchedule& schedule, const Mat& rho_i) {
  if (rho_i.rows() != schedule.dim())
    throw DimensionError("decoherence_functional: state dimension mismatch");
  check_density_matrix(rho_i, 1e-8);
  if (schedule.label_count() > kMaterializationLimit)
    throw ValidationError("decoherence_functional: label count above materialization limit, "
                          "use the streaming interface");
  const Mat rho_sqrt = hermitian_sqrt(rho_i);
  const auto branches = branch_operators(schedule, rho_sqrt, 0.0);
  return functional_from_branches(schedule, branches, 1.0, false);
}

std::map<Label, double> history_probabilities(const DecoherenceFunctional& d) {
  if (!d.projective)
    throw ValidationError("history_probabilities: schedule is not projective");
  if (d.time_symmetric)
    throw ValidationError("history_probabilities: defined only without a final state");
  std::map<Label, double> p;
  double sum = 0.0;
  for (std::size_t i = 0; i < d.labels.size(); ++i) {
    double v = d.diagonal(i);
    if (v < -1e-10)
      throw ValidationError("history_probabilities: negative diagonal");
    v = std::max(v, 0.0);
    p[d.labels[i]] = v;
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-8)
    throw ValidationError("history_probabilities: diagonal does not sum to 1");
  return p;
}

std::optional<double> decoherence_ratio(const DecoherenceFunctional& d, std::size_t i,
                                        std::size_t j, double floor) {
  const double pi = d.diagonal(i);
  const double pj = d.diagonal(j);
  if (pi < floor || pj < floor) return std::nullopt;
  const double num = std::norm(d.matrix(i, j));
  return num / (pi * pj);
}

DecoherenceVerdict is_decoherent(const DecoherenceFunctional& d, double epsilon, double floor) {
  if (epsilon <= 0.0) throw ValidationError("is_decoherent: epsilon must be positive");
  DecoherenceVerdict v;
  for (std::size_t i = 0; i < d.labels.size(); ++i) {
    for (std::size_t j = i + 1; j < d.labels.size(); ++j) {
      const auto r = decoherence_ratio(d, i, j, floor);
      if (r && *r > v.max_ratio) {
        v.max_ratio = *r;
        v.worst_i = i;
        v.worst_j = j;
      }
    }
  }
  v.decoherent = v.max_ratio <= epsilon;
  return v;
}

double sum_rule_violation(const EventSchedule& schedule, const Mat& rho_i, int final_outcome) {
  if (!schedule.projective())
    throw ValidationError("sum_rule_violation: projective schedules only");
  if (schedule.branch_dependent())
    throw ValidationError("sum_rule_violation: coherent side undefined with branch-dependent propagators");
  const auto& events = schedule.events();
  const std::size_t n = events.size();
  if (final_outcome < 0 || final_outcome >= static_cast<int>(events.back().family.size()))
    throw ValidationError("sum_rule_violation: final outcome out of range");

  // Left side: no intermediate events, just the accumulated evolution.
  Mat u = Mat::Identity(schedule.dim(), schedule.dim());
  for (std::size_t k = 0; k < n; ++k) u = schedule.gap_unitary(k, {}) * u;
  const Mat& px = events.back().family[final_outcome];
  const double lhs = (px * u * rho_i * u.adjoint()).trace().real();

  // Right side: intermediate outcomes measured and summed incoherently.
  const auto d = decoherence_functional(schedule, rho_i);
  double rhs = 0.0;
  for (std::size_t i = 0; i < d.labels.size(); ++i)
    if (d.labels[i].back() == final_outcome) rhs += std::max(d.diagonal(i), 0.0);

  return std::abs(lhs - rhs);
}

DecoherenceFunctional time_symmetric_functional(const EventSchedule& schedule,
                                                const Mat& rho_i, const Mat& rho_f) {
  check_density_matrix(rho_i, 1e-8);
  check_density_matrix(rho_f, 1e-8);
  require_same_dim(rho_i, rho_f, "time_symmetric_functional");
  if (rho_i.rows() != schedule.dim())
    throw DimensionError("time_symmetric_functional: state dimension mismatch");
  const double z = (rho_f * rho_i).trace().real();
  if (z <= kDiagonalFloor)
    throw ValidationError("time_symmetric_functional: initial and final states are orthogonal");
  if (schedule.label_count() > kMaterializationLimit)
    throw ValidationError("time_symmetric_functional: label count above materialization limit");

  const Mat rho_sqrt = hermitian_sqrt(rho_i);
  const Mat rho_f_sqrt = hermitian_sqrt(rho_f);
  auto branches = branch_operators(schedule, rho_sqrt, 0.0);
  for (Branch& b : branches) b.op = rho_f_sqrt * (schedule.final_unitary(b.label) * b.op);
  return functional_from_branches(schedule, branches, z, true);
}

PureEndpointReport pure_endpoint_ratio(const EventSchedule& schedule, const Vec& psi,
                                       const Vec& phi, double floor) {
  check_state_vector(psi);
  check_state_vector(phi);
  if (psi.size() != schedule.dim() || phi.size() != schedule.dim())
    throw DimensionError("pure_endpoint_ratio: state dimension mismatch");

  // D(a, b) = <phi|C_a|psi><psi|C_b^dag|phi>: amplitudes suffice.
  const auto branches = branch_operators(schedule, Mat(psi), 0.0);
  std::vector<Complex> amps(branches.size());
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const Vec w = schedule.final_unitary(branches[i].label) * Vec(branches[i].op.col(0));
    amps[i] = phi.dot(w);
  }

  PureEndpointReport rep;
  rep.min_ratio = 1.0;
  bool any = false;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const double pi = std::norm(amps[i]);
    if (pi < floor) continue;
    for (std::size_t j = i + 1; j < branches.size(); ++j) {
      const double pj = std::norm(amps[j]);
      if (pj < floor) continue;
      const double ratio = std::norm(amps[i] * std::conj(amps[j])) / (pi * pj);
      rep.defined_ratios.push_back({branches[i].label, branches[j].label, ratio});
      rep.max_ratio = std::max(rep.max_ratio, ratio);
      rep.min_ratio = any ? std::min(rep.min_ratio, ratio) : ratio;
      any = true;
    }
  }
  if (!any) rep.min_ratio = 0.0;
  return rep;
}

StreamedOffdiagStats streamed_offdiag_stats(const EventSchedule& schedule, const Mat& rho_i,
                                            double prune_tol, double floor) {
  check_density_matrix(rho_i, 1e-8);
  const Mat rho_sqrt = hermitian_sqrt(rho_i);
  StreamedOffdiagStats st;
  st.branches = branch_operators(schedule, rho_sqrt, prune_tol);
  double max_norm = 0.0;
  for (const Branch& b : st.branches) max_norm = std::max(max_norm, b.op.norm());
  st.pruned_bound = prune_tol * std::max(max_norm, prune_tol);
  for (std::size_t i = 0; i < st.branches.size(); ++i) {
    const double pi = st.branches[i].op.squaredNorm();
    for (std::size_t j = i + 1; j < st.branches.size(); ++j) {
      const double pj = st.branches[j].op.squaredNorm();
      const double od = std::abs(frobenius_inner(st.branches[i].op, st.branches[j].op));
      st.max_abs_offdiag = std::max(st.max_abs_offdiag, od);
      if (pi >= floor && pj >= floor)
        st.max_ratio = std::max(st.max_ratio, od * od / (pi * pj));
    }
  }
  return st;
}

}  // namespace decohist
