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

#include "decohist/runners.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "decohist/cosmo.hpp"
#include "decohist/ensembles.hpp"
#include "decohist/oscillator.hpp"
#include "decohist/rng.hpp"

namespace decohist::runners {

namespace {

Vec random_pure_state(Eigen::Index d, CounterRng& rng) {
  Vec psi(d);
  for (Eigen::Index i = 0; i < d; ++i)
    psi(i) = Complex(rng.next_normal(), rng.next_normal());
  psi /= psi.norm();
  return psi;
}

Mat random_density(Eigen::Index d, CounterRng& rng) {
  Mat g(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i)
      g(i, j) = Complex(rng.next_normal(), rng.next_normal());
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

Json label_array(const Label& label) {
  Json out = Json::array();
  for (int a : label) out.push_back(a);
  return out;
}

Mat state_or_mixed(const std::optional<Json>& state_json, Eigen::Index d) {
  if (!state_json) return Mat::Identity(d, d) / static_cast<double>(d);
  Mat rho = operator_from_json(*state_json);
  if (rho.rows() != d) throw DimensionError("state dimension does not match the model");
  check_density_matrix(rho);
  return rho;
}

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
};

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log10(x[i]);
    const double ly = std::log10(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  SlopeFit fit;
  fit.slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / dn;
  return fit;
}

}  // namespace

Json RunTolerances::to_json() const {
  return Json{{"epsilon", epsilon}, {"floor", floor}, {"prune", prune}};
}

void RunTolerances::apply_override(const std::string& key, double value) {
  if (key == "epsilon")
    epsilon = value;
  else if (key == "floor")
    floor = value;
  else if (key == "prune")
    prune = value;
  else
    throw ValidationError("unknown tolerance '" + key + "'");
}

Json oscillator_phase(int levels, int steps, std::uint64_t seed, const RunTolerances& tol) {
  TruncatedOscillator osc(levels, 1.0);
  const auto schedule = phase_history_schedule(osc, steps);
  CounterRng rng(seed);
  const int start = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(levels));
  const auto basis = phase_states(osc);
  const Mat rho_i = pure_density(basis.states[start]);

  Json out;
  out["config"] = Json{{"subcommand", "oscillator-phase"}, {"levels", levels},
                       {"steps", steps},  {"seed", seed},
                       {"start_phase_index", start}, {"tolerances", tol.to_json()}};
  if (schedule.label_count() <= kMaterializationLimit) {
    const auto d = decoherence_functional(schedule, rho_i);
    out["functional"] = functional_report(d, tol.epsilon);
  } else {
    const auto stats = streamed_offdiag_stats(schedule, rho_i, tol.prune, tol.floor);
    Json survivors = Json::array();
    for (const auto& b : stats.branches)
      survivors.push_back(Json{{"label", label_array(b.label)},
                               {"probability", b.op.squaredNorm()}});
    out["streamed"] = Json{{"max_abs_offdiag", stats.max_abs_offdiag},
                           {"max_ratio", stats.max_ratio},
                           {"pruned_bound", stats.pruned_bound},
                           {"surviving_branches", std::move(survivors)}};
  }
  return out;
}

Json oscillator_energy(int levels, int events, std::uint64_t seed, const RunTolerances& tol) {
  TruncatedOscillator osc(levels, 1.0);
  CounterRng rng(seed);
  std::vector<double> times;
  double t = 0.0;
  for (int k = 0; k < events; ++k) {
    t += 0.05 + rng.next_double();
    times.push_back(t);
  }
  const auto schedule = energy_history_schedule(osc, times);
  const Mat rho_i = random_density(levels, rng);
  const auto d = decoherence_functional(schedule, rho_i);

  Json out;
  out["config"] = Json{{"subcommand", "oscillator-energy"}, {"levels", levels},
                       {"events", events}, {"seed", seed}, {"times", times},
                       {"tolerances", tol.to_json()}};
  out["functional"] = functional_report(d, tol.epsilon);
  return out;
}

Json mixed_coherence(int levels, int steps, const RunTolerances& tol) {
  TruncatedOscillator osc(levels, 1.0);
  const auto report = mixed_basis_coherence_demo(osc, steps);
  Json ratios = Json::array();
  for (const auto& pr : report.ground_to_ground.defined_ratios)
    ratios.push_back(Json{{"a", label_array(pr.a)}, {"b", label_array(pr.b)},
                          {"ratio", pr.ratio}});
  Json out;
  out["config"] = Json{{"subcommand", "mixed-coherence"}, {"levels", levels},
                       {"steps", steps}, {"tolerances", tol.to_json()}};
  out["pairs"] = std::move(ratios);
  out["max_ratio"] = report.ground_to_ground.max_ratio;
  out["min_ratio"] = report.ground_to_ground.min_ratio;
  out["all_ratios_one"] = report.all_ratios_one;
  out["deterministic_max_ratio"] = report.deterministic_max_ratio;
  return out;
}

Json functional_from_file(const Json& schedule_json, const RunTolerances& tol) {
  auto file = schedule_from_json(schedule_json);
  check_density_matrix(file.initial_state);
  const auto d = decoherence_functional(file.schedule, file.initial_state);
  Json out;
  out["config"] = Json{{"subcommand", "functional"}, {"tolerances", tol.to_json()}};
  out["functional"] = functional_report(d, tol.epsilon);
  if (file.schedule.projective() && !file.schedule.branch_dependent()) {
    const int n_final = static_cast<int>(file.schedule.events().back().family.size());
    Json violations = Json::array();
    for (int x = 0; x < n_final; ++x)
      violations.push_back(sum_rule_violation(file.schedule, file.initial_state, x));
    out["sum_rule_violations"] = std::move(violations);
  }
  return out;
}

Json ts_functional_from_file(const Json& schedule_json, const RunTolerances& tol) {
  auto file = schedule_from_json(schedule_json);
  check_density_matrix(file.initial_state);
  if (!file.final_state)
    throw ValidationError("ts-functional: schedule file needs a final_state");
  check_density_matrix(*file.final_state);
  const auto d = time_symmetric_functional(file.schedule, file.initial_state,
                                           *file.final_state);
  Json out;
  out["config"] = Json{{"subcommand", "ts-functional"}, {"tolerances", tol.to_json()}};
  out["functional"] = functional_report(d, tol.epsilon);
  return out;
}

Json lindblad_propagate(const Json& model_json, const std::optional<Json>& state_json,
                        double t) {
  const auto model = model_from_json(model_json);
  const Mat rho0 = state_or_mixed(state_json, model.dim());
  const Mat rho_t = propagate(model, rho0, t);
  Json out;
  out["config"] = Json{{"subcommand", "lindblad-propagate"}, {"t", t},
                       {"dim", model.dim()},
                       {"method", model.dim() <= kSuperopExpDimLimit ? "superop_exp" : "rk4"}};
  out["state"] = operator_to_json(rho_t);
  out["trace"] = rho_t.trace().real();
  out["rhs_trace_norm_at_t"] = trace_norm(lindblad_rhs(model, rho_t));
  return out;
}

Json jump_ensemble(const Json& model_json, const std::optional<Json>& state_json, double dt,
                   double horizon, int trajectories, std::uint64_t seed, bool exact_oracle) {
  const auto model = model_from_json(model_json);
  const Mat rho0 = state_or_mixed(state_json, model.dim());
  const auto rep = ensemble_average(model, rho0, horizon, dt,
                                    static_cast<std::size_t>(trajectories), seed,
                                    exact_oracle);

  const int listed = std::min(trajectories, 50);
  Json rows = Json::array();
  for (int k = 0; k < listed; ++k) {
    const auto traj = jump_unravel(model, rho0, horizon, dt, CounterRng::derive(seed, k));
    for (const auto& ev : traj.jumps)
      rows.push_back(Json::array({k, ev.time, ev.channel, "jump"}));
  }

  Json out;
  out["config"] = Json{{"subcommand", "jump-ensemble"}, {"dt", dt}, {"horizon", horizon},
                       {"trajectories", trajectories}, {"seed", seed},
                       {"exact_oracle", exact_oracle}, {"listed_trajectories", listed}};
  out["mean_state"] = operator_to_json(rep.mean_state);
  out["statistical_error"] = rep.statistical_error;
  if (exact_oracle) out["trace_distance_to_exact"] = rep.trace_distance_to_exact;
  out["columns"] = Json::array({"trajectory_id", "time", "channel", "event"});
  out["rows"] = std::move(rows);
  return out;
}

Json povm_step_order(const Json& model_json, const std::optional<Json>& state_json,
                     std::vector<double> dts) {
  const auto model = model_from_json(model_json);
  const Mat rho0 = state_or_mixed(state_json, model.dim());
  std::sort(dts.begin(), dts.end(), std::greater<double>());
  std::vector<double> errors;
  for (double dt : dts) {
    const Mat approx = averaged_step(model, rho0, dt);
    const Mat exact = propagate(model, rho0, dt);
    errors.push_back(trace_norm(approx - exact));
  }
  const auto fit = fit_loglog(dts, errors);
  Json rows = Json::array();
  for (std::size_t i = 0; i < dts.size(); ++i)
    rows.push_back(Json::array({dts[i], errors[i]}));
  Json out;
  out["config"] = Json{{"subcommand", "povm-step-order"}, {"dts", dts}};
  out["columns"] = Json::array({"dt", "trace_norm_error"});
  out["rows"] = std::move(rows);
  out["slope"] = fit.slope;
  return out;
}

Json relaxation(const Json& model_json, double spacing, int events, std::uint64_t seed) {
  const auto model = model_from_json(model_json);
  CounterRng rng(seed);
  std::vector<int> ranks(static_cast<std::size_t>(model.dim()), 1);
  std::vector<ProjectorFamily> families;
  for (int k = 0; k < events; ++k)
    families.push_back(sample_random_family(model.dim(), ranks, rng));
  const auto rep = relaxation_decoherence_experiment(model, families, spacing);

  Json out;
  out["config"] = Json{{"subcommand", "relaxation"}, {"spacing", spacing},
                       {"events", events}, {"seed", seed}};
  out["tau"] = rep.tau;
  out["s_over_tau"] = rep.s_over_tau;
  out["max_ratio"] = rep.max_ratio;
  out["fixed_point"] = operator_to_json(rep.fixed_point);
  out["event_marginals"] = rep.event_marginals;
  out["fixed_point_probs"] = rep.fixed_point_probs;
  return out;
}

Json cosmo_run(double lambda0, double lambda1_lo, double lambda1_hi, int sweep_steps,
               double c, std::optional<double> brain_de, std::optional<double> brain_ds) {
  if (sweep_steps < 1) throw ValidationError("cosmo: sweep steps must be >= 1");
  Json rows = Json::array();
  Json brain_rows = Json::array();
  for (int k = 0; k < sweep_steps; ++k) {
    double lambda1 = lambda1_lo;
    if (sweep_steps > 1) {
      const double f = static_cast<double>(k) / static_cast<double>(sweep_steps - 1);
      lambda1 = std::exp(std::log(lambda1_lo) +
                         f * (std::log(lambda1_hi) - std::log(lambda1_lo)));
    }
    cosmo::ReinflationParams p{lambda0, lambda1, c};
    p.validate();
    const auto low = p.low();
    const double log_p = cosmo::reinflation_log_probability(p);
    const auto rec = cosmo::recurrence_log_time(p);
    rows.push_back(Json::array({lambda1, low.horizon_length, low.temperature, low.entropy,
                                cosmo::reinflation_energy(p), log_p, rec.log_time}));
    if (brain_de && brain_ds) {
      const auto cmp =
          cosmo::compare_boltzmann_brain(p, cosmo::FluctuationSpec{*brain_de, *brain_ds});
      brain_rows.push_back(Json::array({lambda1, cmp.log_odds,
                                        cmp.ordinary_brains_dominate,
                                        cmp.brain_energy_exceeds_seed,
                                        cmp.brain_energy_exceeds_prose}));
    }
  }
  Json out;
  Json cfg = Json{{"subcommand", "cosmo"}, {"lambda0", lambda0},
                  {"lambda1_lo", lambda1_lo}, {"lambda1_hi", lambda1_hi},
                  {"sweep_steps", sweep_steps}, {"C", c}};
  if (brain_de) cfg["brain_delta_e"] = *brain_de;
  if (brain_ds) cfg["brain_delta_s"] = *brain_ds;
  out["config"] = std::move(cfg);
  const auto high = cosmo::de_sitter_from_lambda(lambda0);
  out["high_phase"] = Json{{"lambda", high.lambda}, {"horizon_length", high.horizon_length},
                           {"temperature", high.temperature}, {"entropy", high.entropy}};
  out["columns"] = Json::array({"lambda1", "horizon_length", "temperature", "entropy",
                                "seed_energy", "log_p_reinflate", "log_recurrence_time"});
  out["rows"] = std::move(rows);
  if (brain_de && brain_ds) {
    out["brain_columns"] = Json::array({"lambda1", "log_odds", "ordinary_brains_dominate",
                                        "brain_energy_exceeds_seed",
                                        "brain_energy_exceeds_prose"});
    out["brain_rows"] = std::move(brain_rows);
  }
  return out;
}

Json random_histories(int dim, int events, const std::vector<int>& ranks, int samples,
                      std::uint64_t seed) {
  RandomScheduleSpec spec;
  spec.dim = dim;
  spec.n_events = events;
  spec.ranks = ranks;
  spec.samples = samples;
  spec.seed = CounterRng::derive(seed, 1);
  CounterRng rng(CounterRng::derive(seed, 0));
  const Vec psi0 = random_pure_state(dim, rng);
  const auto rep = typical_ratio_experiment(spec, psi0);

  Json out;
  out["config"] = Json{{"subcommand", "random-histories"}, {"dim", dim}, {"events", events},
                       {"ranks", ranks}, {"samples", samples}, {"seed", seed}};
  out["mean_scaled_all"] = rep.mean_scaled_all;
  out["mean_scaled_offdiag"] = rep.mean_scaled_offdiag;
  out["median_scaled_offdiag"] = rep.median_scaled_offdiag;
  out["median_ratio_offdiag"] = rep.median_ratio_offdiag;
  out["median_ratio_same_final"] = rep.median_ratio_same_final;
  out["median_overlap_times_d"] = rep.median_overlap_times_d;
  out["pairs_all"] = rep.pairs_all;
  out["pairs_offdiag"] = rep.pairs_offdiag;
  return out;
}

std::string rows_to_csv(const Json& artifact) {
  if (!artifact.contains("columns") || !artifact.contains("rows"))
    throw ValidationError("artifact has no tabular section; use JSON output");
  std::ostringstream os;
  const auto& cols = artifact.at("columns");
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) os << ',';
    os << cols.at(i).get<std::string>();
  }
  os << '\n';
  for (const auto& row : artifact.at("rows")) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      const auto& cell = row.at(i);
      if (cell.is_string())
        os << cell.get<std::string>();
      else
        os << cell.dump();
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace decohist::runners
