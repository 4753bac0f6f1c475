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

#include "decohist/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <unistd.h>

#include "decohist/cosmo.hpp"
#include "decohist/ensembles.hpp"
#include "decohist/histories.hpp"
#include "decohist/openquantum.hpp"
#include "decohist/oscillator.hpp"
#include "decohist/rng.hpp"
#include "decohist/runners.hpp"
#include "decohist/schedule_io.hpp"

namespace decohist::selftest {

namespace {

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << msg;
    }
  }

  void note(const std::string& msg) {
    if (detail.tellp() > 0) detail << "; ";
    detail << msg;
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Vec basis_vector(Eigen::Index d, Eigen::Index i) {
  Vec v = Vec::Zero(d);
  v(i) = 1.0;
  return v;
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

ProjectorFamily x_basis_family() {
  Vec plus(2), minus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  return ProjectorFamily{{pure_density(plus), pure_density(minus)}};
}

ProjectorFamily z_basis_family() {
  return ProjectorFamily{{pure_density(basis_vector(2, 0)), pure_density(basis_vector(2, 1))}};
}

LindbladModel qubit_damping_model() {
  Mat l = Mat::Zero(2, 2);
  l(0, 1) = 1.0;  // sigma_minus
  return LindbladModel::checked(Mat::Zero(2, 2), {{l, 1.0}});
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
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
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

double max_offdiag(const Mat& m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) worst = std::max(worst, std::abs(m(i, j)));
  return worst;
}

// ---- criterion 1: phase-history decoherence -------------------------------

void phase_decoherence(Check& c) {
  for (int n : {2, 4, 8, 16}) {
    TruncatedOscillator osc(n, 1.0);
    const int steps = 4;
    const auto schedule = phase_history_schedule(osc, steps);
    const Mat rho_i = pure_density(basis_vector(n, 0));
    const auto stats = streamed_offdiag_stats(schedule, rho_i, 1e-12);

    c.expect(stats.max_abs_offdiag <= 1e-10,
             "N=" + std::to_string(n) + ": off-diagonal " + fmt(stats.max_abs_offdiag));
    c.expect(stats.pruned_bound <= 1e-10,
             "N=" + std::to_string(n) + ": pruned bound " + fmt(stats.pruned_bound));
    c.expect(stats.branches.size() == static_cast<std::size_t>(n),
             "N=" + std::to_string(n) + ": " + std::to_string(stats.branches.size()) +
                 " surviving chains");

    // All surviving labels must advance by the same +-1 shift per step.
    int shift = 0;
    bool chains_ok = true;
    for (const auto& b : stats.branches) {
      for (std::size_t k = 1; k < b.label.size(); ++k) {
        int s = (b.label[k] - b.label[k - 1]) % n;
        if (s < 0) s += n;
        if (s == n - 1) s = -1;
        if (shift == 0)
          shift = s;
        else if (s != shift)
          chains_ok = false;
      }
      const double p = b.op.squaredNorm();
      c.expect(std::abs(p - 1.0 / n) <= 1e-10,
               "N=" + std::to_string(n) + ": chain weight " + fmt(p));
    }
    c.expect(chains_ok && (shift == 1 || shift == -1 || steps < 2),
             "N=" + std::to_string(n) + ": labels are not successor chains");
  }
}

// ---- criterion 2: energy-history triviality --------------------------------

void energy_triviality(Check& c) {
  TruncatedOscillator osc(6, 1.3);
  const auto schedule = energy_history_schedule(osc, {0.3, 0.95, 2.7});
  CounterRng rng(41);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Mat rho_i = random_density(6, rng);
    const auto d = decoherence_functional(schedule, rho_i);
    worst = std::max(worst, max_offdiag(d.matrix));
  }
  c.expect(worst <= 1e-10, "max off-diagonal " + fmt(worst));
  c.note("20 random initial states, max off-diagonal " + fmt(worst));
}

// ---- criterion 3: pure-endpoint coherence ----------------------------------

void pure_endpoint_coherence(Check& c) {
  for (int n : {2, 4, 8}) {
    for (int steps : {1, 2, 3}) {
      TruncatedOscillator osc(n, 1.0);
      const auto rep = mixed_basis_coherence_demo(osc, steps);
      c.expect(rep.all_ratios_one && std::abs(rep.ground_to_ground.max_ratio - 1.0) <= 1e-8 &&
                   std::abs(rep.ground_to_ground.min_ratio - 1.0) <= 1e-8,
               "N=" + std::to_string(n) + " steps=" + std::to_string(steps) + ": ratios in [" +
                   fmt(rep.ground_to_ground.min_ratio) + ", " +
                   fmt(rep.ground_to_ground.max_ratio) + "]");
    }
  }
}

// ---- criterion 4: sum-rule law ---------------------------------------------

EventSchedule random_unitary_schedule(Eigen::Index d, int n_events, CounterRng& rng) {
  std::vector<int> ranks(static_cast<std::size_t>(d), 1);
  std::vector<Event> events;
  for (int k = 0; k < n_events; ++k) {
    Event e;
    e.time = static_cast<double>(k);
    e.family = sample_random_family(d, ranks, rng).members;
    events.push_back(std::move(e));
  }
  std::vector<Mat> gaps;
  for (int k = 0; k + 1 < n_events; ++k) gaps.push_back(haar_unitary(d, rng));
  return EventSchedule::with_unitaries(d, std::move(events), std::move(gaps));
}

void sum_rule_law(Check& c) {
  const double epsilon = 1e-6;
  const double bound = 10.0 * std::sqrt(epsilon);
  CounterRng rng(4242);
  int decoherent_count = 0;
  double worst = 0.0;

  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index d = (trial % 2 == 0) ? 2 : 3;
    // 100 of the 500 are two-event schedules started from the maximally
    // mixed state; trace cyclicity pins both outcomes, so they are exactly
    // decoherent.  Three or more events would reopen interference between
    // intermediate outcomes even at rho = I/d.
    const bool mixed = trial % 5 == 4;
    const int n_events = mixed ? 2 : 2 + (trial % 3 == 0 ? 1 : 0);
    const auto schedule = random_unitary_schedule(d, n_events, rng);
    Mat rho_i;
    if (mixed)
      rho_i = Mat::Identity(d, d) / static_cast<double>(d);
    else
      rho_i = random_density(d, rng);

    const auto func = decoherence_functional(schedule, rho_i);
    const auto verdict = is_decoherent(func, epsilon);
    if (!verdict.decoherent) continue;
    ++decoherent_count;
    const int n_final = static_cast<int>(schedule.events().back().family.size());
    for (int x = 0; x < n_final; ++x) {
      const double v = sum_rule_violation(schedule, rho_i, x);
      worst = std::max(worst, v);
      c.expect(v <= bound, "trial " + std::to_string(trial) + ": violation " + fmt(v));
    }
  }
  c.expect(decoherent_count >= 100,
           "only " + std::to_string(decoherent_count) + " decoherent schedules");
  c.note(std::to_string(decoherent_count) + "/500 decoherent, worst violation " + fmt(worst));

  // Double-slit schedule: x-basis then z-basis readout with no evolution in
  // between; interference makes the classical sum rule fail badly.
  std::vector<Event> events(2);
  events[0].time = 0.0;
  events[0].family = x_basis_family().members;
  events[1].time = 1.0;
  events[1].family = z_basis_family().members;
  const auto slit =
      EventSchedule::with_unitaries(2, std::move(events), {Mat::Identity(2, 2)});
  const double v = sum_rule_violation(slit, pure_density(basis_vector(2, 0)), 0);
  c.expect(v >= 0.1, "interferometer violation " + fmt(v));
  c.note("interferometer violation " + fmt(v));
}

// ---- criterion 5: one-step order -------------------------------------------

void povm_step_order_criterion(Check& c) {
  const std::vector<double> dts = {1e-1, 1e-2, 1e-3, 1e-4};
  CounterRng rng(77);

  struct Case {
    std::string name;
    LindbladModel model;
    Mat rho;
  };
  std::vector<Case> cases;
  cases.push_back({"qubit damping", qubit_damping_model(), Mat::Identity(2, 2) * 0.5});
  cases.push_back({"thermal N=8", thermal_oscillator_model(8, 1.0, 1.0, 1.0),
                   random_density(8, rng)});

  for (const auto& cs : cases) {
    std::vector<double> errors;
    for (double dt : dts) {
      const Mat approx = averaged_step(cs.model, cs.rho, dt);
      const Mat exact = propagate(cs.model, cs.rho, dt);
      errors.push_back(trace_norm(approx - exact));
    }
    const double slope = fit_slope(dts, errors);
    c.expect(std::abs(slope - 2.0) <= 0.2, cs.name + ": slope " + fmt(slope));
    c.note(cs.name + " slope " + fmt(slope));
  }
}

// ---- criterion 6: unraveling consistency ------------------------------------

void unraveling_consistency(Check& c) {
  const auto model = qubit_damping_model();
  const Mat rho0 = pure_density(basis_vector(2, 1));
  const double dt = 1e-3;
  const double horizon = 1.0;

  const auto rep = ensemble_average(model, rho0, horizon, dt, 10000, 20260823, true);
  c.expect(rep.trace_distance_to_exact <= 0.03,
           "M=1e4 trace distance " + fmt(rep.trace_distance_to_exact));
  c.note("M=1e4 trace distance " + fmt(rep.trace_distance_to_exact));

  const std::vector<std::size_t> ms = {100, 1000, 10000};
  const std::vector<int> reps = {40, 12, 5};
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    double sum = 0.0;
    for (int r = 0; r < reps[i]; ++r) {
      const auto rr = ensemble_average(model, rho0, horizon, dt, ms[i],
                                       CounterRng::derive(555, 100 * i + r), true);
      sum += rr.trace_distance_to_exact;
    }
    xs.push_back(static_cast<double>(ms[i]));
    ys.push_back(sum / reps[i]);
  }
  const double slope = fit_slope(xs, ys);
  c.expect(std::abs(slope + 0.5) <= 0.1, "error slope vs M " + fmt(slope));
  c.note("error slope vs M " + fmt(slope));
}

// ---- criterion 7: thermal stationarity --------------------------------------

void thermal_stationarity(Check& c) {
  const int n = 22;
  const double omega = 1.0, beta = 1.0, gamma_minus = 1.0;
  const auto model = thermal_oscillator_model(n, omega, beta, gamma_minus);

  // Boltzmann weights of the untruncated state beyond the cutoff.
  const double z_inf = 1.0 / (1.0 - std::exp(-beta * omega));
  const double tail = std::exp(-beta * omega * n) * z_inf / z_inf;
  c.expect(tail < 1e-8, "tail weight " + fmt(tail));

  Mat rho_th = Mat::Zero(n, n);
  double z = 0.0;
  for (int k = 0; k < n; ++k) z += std::exp(-beta * omega * k);
  for (int k = 0; k < n; ++k) rho_th(k, k) = std::exp(-beta * omega * k) / z;

  const double rhs_norm = trace_norm(lindblad_rhs(model, rho_th));
  c.expect(rhs_norm <= 1e-6, "rhs trace norm " + fmt(rhs_norm));

  const Mat evolved = propagate(model, rho_th, 10.0 / gamma_minus);
  const double dist = trace_distance(evolved, rho_th);
  c.expect(dist <= 1e-6, "trace distance after 10/gamma " + fmt(dist));
  c.note("tail " + fmt(tail) + ", rhs norm " + fmt(rhs_norm) + ", drift " + fmt(dist));
}

// ---- criterion 8: time-symmetric results ------------------------------------

void time_symmetric_results(Check& c) {
  Mat h = Mat::Zero(2, 2);
  h(0, 0) = 1.0;
  h(1, 1) = -1.0;  // sigma_z
  Mat rho = Mat::Zero(2, 2);
  rho(0, 0) = 0.7;
  rho(1, 1) = 0.3;  // stationary for sigma_z
  const auto xf = x_basis_family();

  // (a) single event: invariant under time reassignment.
  CounterRng rng(99);
  Mat reference;
  double worst_a = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double t0 = -1.0 - rng.next_double();
    const double t1 = t0 + 0.1 + 2.0 * rng.next_double();
    const double tf = t1 + 0.1 + 2.0 * rng.next_double();
    std::vector<Event> events(1);
    events[0].time = t1;
    events[0].family = xf.members;
    const auto schedule = EventSchedule::with_hamiltonian(2, std::move(events), h, t0, tf);
    const auto d = time_symmetric_functional(schedule, rho, rho);
    if (trial == 0)
      reference = d.matrix;
    else
      worst_a = std::max(worst_a, (d.matrix - reference).cwiseAbs().maxCoeff());
  }
  c.expect(worst_a <= 1e-10, "single-event drift " + fmt(worst_a));
  c.note("single-event drift " + fmt(worst_a));

  // (b) two events: the inter-event gap matters.
  Mat first;
  double spread = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double gap = 0.05 + 0.1 * k;
    std::vector<Event> events(2);
    events[0].time = 0.0;
    events[0].family = xf.members;
    events[1].time = gap;
    events[1].family = xf.members;
    const auto schedule =
        EventSchedule::with_hamiltonian(2, std::move(events), h, -0.5, gap + 0.5);
    const auto d = time_symmetric_functional(schedule, rho, rho);
    if (k == 0)
      first = d.matrix;
    else
      spread = std::max(spread, (d.matrix - first).cwiseAbs().maxCoeff());
  }
  c.expect(spread >= 1e-3, "two-event spread " + fmt(spread));
  c.note("two-event spread " + fmt(spread));

  // (c) maximally mixed endpoints decohere the catalog.
  {
    TruncatedOscillator osc(4, 1.0);
    const auto schedule = phase_history_schedule(osc, 2);
    const Mat eye4 = Mat::Identity(4, 4) / 4.0;
    const auto d = time_symmetric_functional(schedule, eye4, eye4);
    const auto v = is_decoherent(d, 1e-6);
    c.expect(v.decoherent, "oscillator catalog entry max ratio " + fmt(v.max_ratio));
  }
  {
    std::vector<Event> events(2);
    events[0].time = 0.0;
    events[0].family = xf.members;
    events[1].time = 1.0;
    events[1].family = z_basis_family().members;
    const auto slit =
        EventSchedule::with_unitaries(2, std::move(events), {Mat::Identity(2, 2)});
    const Mat eye2 = Mat::Identity(2, 2) / 2.0;
    const auto d = time_symmetric_functional(slit, eye2, eye2);
    const auto v = is_decoherent(d, 1e-6);
    c.expect(v.decoherent, "interferometer catalog entry max ratio " + fmt(v.max_ratio));
  }
  {
    CounterRng rng2(123);
    const auto schedule = random_unitary_schedule(2, 2, rng2);
    const Mat eye2 = Mat::Identity(2, 2) / 2.0;
    const auto d = time_symmetric_functional(schedule, eye2, eye2);
    const auto v = is_decoherent(d, 1e-6);
    c.expect(v.decoherent, "random catalog entry max ratio " + fmt(v.max_ratio));
  }
}

// ---- criterion 9: relaxation decoherence ------------------------------------

void relaxation_decoherence(Check& c) {
  const auto model = qubit_damping_model();
  const std::vector<ProjectorFamily> families = {x_basis_family(), x_basis_family()};
  // Spectral gap of the damping Liouvillian is 1/2, so tau = 2 and s = 40.
  const auto rep = relaxation_decoherence_experiment(model, families, 40.0);
  c.expect(std::abs(rep.s_over_tau - 20.0) <= 1e-6, "s/tau " + fmt(rep.s_over_tau));
  c.expect(rep.max_ratio <= 1e-3, "max ratio " + fmt(rep.max_ratio));
  double worst = 0.0;
  for (std::size_t k = 0; k < rep.event_marginals.size(); ++k)
    for (std::size_t a = 0; a < rep.event_marginals[k].size(); ++a)
      worst = std::max(worst,
                       std::abs(rep.event_marginals[k][a] - rep.fixed_point_probs[k][a]));
  c.expect(worst <= 1e-6, "marginal mismatch " + fmt(worst));
  c.note("tau " + fmt(rep.tau) + ", max ratio " + fmt(rep.max_ratio) + ", marginal mismatch " +
         fmt(worst));
}

// ---- criterion 10: cosmology identities -------------------------------------

void cosmology_identities(Check& c) {
  CounterRng rng(31337);
  double worst_chain = 0.0;
  for (int trial = 0; trial < 100000; ++trial) {
    const double lambda0 = 3.0 * std::exp(-6.0 * rng.next_double());
    const double log_ratio = 276.0 * rng.next_double();  // up to ~1e120
    const double lambda1 = lambda0 * std::exp(-log_ratio);
    const double cc = std::exp(2.0 * rng.next_double() - 1.0);
    cosmo::ReinflationParams p{lambda0, lambda1, cc};
    // Cross-form identity checks run inside these calls and throw on failure.
    cosmo::reinflation_energy(p);
    const double log_p = cosmo::reinflation_log_probability(p);
    const auto rec = cosmo::recurrence_log_time(p);
    const double chain = std::abs(rec.log_time + log_p - std::log(rec.prefactor));
    worst_chain = std::max(worst_chain, chain / std::max(1.0, std::abs(log_p)));
  }
  c.expect(worst_chain <= 1e-12, "recurrence chain residual " + fmt(worst_chain));

  // The realistic cosmological term stays finite in log space.
  cosmo::ReinflationParams tiny{3.0, 3e-122, 1.0};
  const double log_p_tiny = cosmo::reinflation_log_probability(tiny);
  c.expect(std::isfinite(log_p_tiny) && log_p_tiny < -1e60,
           "log p at lambda1=3e-122 is " + fmt(log_p_tiny));
  c.expect(std::isfinite(cosmo::recurrence_log_time(tiny).log_time),
           "recurrence time overflowed");

  // Brain verdict flips exactly at the reinflation spec.
  cosmo::ReinflationParams p{3.0, 0.03, 1.0};
  const double de = cosmo::reinflation_energy(p);
  const double ds = p.high().entropy;
  const auto at_equal = cosmo::compare_boltzmann_brain(p, {de, ds});
  const auto above = cosmo::compare_boltzmann_brain(p, {de * (1.0 + 1e-9), ds});
  const auto below = cosmo::compare_boltzmann_brain(p, {de * (1.0 - 1e-9), ds});
  const double log_p = cosmo::reinflation_log_probability(p);
  c.expect(std::abs(at_equal.log_odds) <= 1e-9 * std::abs(log_p),
           "log odds at equality " + fmt(at_equal.log_odds));
  c.expect(above.log_odds > 0.0 && above.ordinary_brains_dominate,
           "costlier brain should lose");
  c.expect(below.log_odds < 0.0 && !below.ordinary_brains_dominate,
           "cheaper brain should win");
  c.note("chain residual " + fmt(worst_chain) + ", log odds at equality " +
         fmt(at_equal.log_odds));
}

// ---- criterion 11: typical-histories law ------------------------------------

void typical_histories(Check& c) {
  RandomScheduleSpec spec;
  spec.dim = 64;
  spec.n_events = 2;
  spec.ranks = {32, 32};
  spec.samples = 1000;
  spec.seed = 8675309;
  CounterRng rng(CounterRng::derive(spec.seed, 0xfeed));
  Vec psi(64);
  for (Eigen::Index i = 0; i < 64; ++i)
    psi(i) = Complex(rng.next_normal(), rng.next_normal());
  psi /= psi.norm();

  const auto rep = typical_ratio_experiment(spec, psi);
  c.expect(rep.mean_scaled_all >= 0.2 && rep.mean_scaled_all <= 5.0,
           "mean ratio*d*p*p' = " + fmt(rep.mean_scaled_all));
  c.note("mean ratio*d*p*p' = " + fmt(rep.mean_scaled_all) + " (off-diagonal-only mean " +
         fmt(rep.mean_scaled_offdiag) + ")");

  const auto cap = information_capacity_check(64, 2, 60, 424242);
  c.expect(cap.crossed, "no threshold crossing found");
  if (cap.crossed) {
    const double ratio = cap.crossing_scale / cap.predicted_scale;
    c.expect(ratio >= 0.25 && ratio <= 4.0,
             "crossing scale " + fmt(cap.crossing_scale) + " vs predicted " +
                 fmt(cap.predicted_scale));
    c.note("crossing " + fmt(cap.crossing_scale) + " vs predicted " +
           fmt(cap.predicted_scale));
  }
}

// ---- criterion 12: determinism ----------------------------------------------

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void determinism(Check& c, const std::string& cli_path) {
  namespace fs = std::filesystem;
  if (cli_path.empty()) {
    c.expect(false, "no executable path supplied");
    return;
  }
  const fs::path dir =
      fs::temp_directory_path() / ("decohist-selftest-" + std::to_string(::getpid()));
  fs::create_directories(dir);

  // Input fixtures.
  {
    Json sched;
    sched["dim"] = 2;
    sched["initial_state"] = operator_to_json(Mat::Identity(2, 2) * 0.5);
    Json e0, e1;
    e0["t"] = 0.0;
    e0["kind"] = "projective";
    e0["family"] = Json::array();
    for (const auto& p : x_basis_family().members) e0["family"].push_back(operator_to_json(p));
    e1["t"] = 1.0;
    e1["kind"] = "projective";
    e1["family"] = Json::array();
    for (const auto& p : z_basis_family().members) e1["family"].push_back(operator_to_json(p));
    sched["events"] = Json::array({e0, e1});
    Mat h = Mat::Zero(2, 2);
    h(0, 0) = 1.0;
    h(1, 1) = -1.0;
    sched["propagator"] = Json{{"hamiltonian", operator_to_json(h)}};
    sched["initial_time"] = -0.5;
    std::ofstream(dir / "sched.json") << sched.dump(2) << '\n';
    sched["final_state"] = operator_to_json(Mat::Identity(2, 2) * 0.5);
    sched["final_time"] = 1.5;
    std::ofstream(dir / "sched_ts.json") << sched.dump(2) << '\n';
    std::ofstream(dir / "model.json") << model_to_json(qubit_damping_model()).dump(2) << '\n';
  }

  const std::string model = (dir / "model.json").string();
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"oscillator-phase", "oscillator-phase --N 4 --steps 2 --seed 7"},
      {"oscillator-energy", "oscillator-energy --N 4 --events 3 --seed 7"},
      {"mixed-coherence", "mixed-coherence --N 4 --steps 2"},
      {"functional", "functional --input " + (dir / "sched.json").string()},
      {"ts-functional", "ts-functional --input " + (dir / "sched_ts.json").string()},
      {"lindblad-propagate", "lindblad-propagate --model " + model + " --t 0.5"},
      {"jump-ensemble", "jump-ensemble --model " + model +
                            " --dt 0.01 --horizon 0.1 --trajectories 20 --seed 5 "
                            "--exact-oracle on"},
      {"povm-step-order", "povm-step-order --model " + model + " --dts 0.1 --dts 0.01"},
      {"relaxation", "relaxation --model " + model + " --spacing 5 --events 2 --seed 3"},
      {"cosmo", "cosmo --lambda0 3 --lambda1 0.03 --C 1 --brain-dE 10 --brain-dS 1"},
      {"random-histories",
       "random-histories --dim 8 --events 2 --ranks 4 --ranks 4 --samples 20 --seed 11"},
  };

  for (const auto& [name, args] : cases) {
    const fs::path out1 = dir / (name + ".1.json");
    const fs::path out2 = dir / (name + ".2.json");
    bool ok = true;
    for (const fs::path& out : {out1, out2}) {
      const std::string cmd =
          "\"" + cli_path + "\" " + args + " --output \"" + out.string() + "\"";
      if (std::system(cmd.c_str()) != 0) {
        c.expect(false, name + ": nonzero exit");
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const std::string a = read_file(out1);
    const std::string b = read_file(out2);
    c.expect(!a.empty() && a == b, name + ": outputs differ");
  }
  c.note(std::to_string(cases.size()) + " subcommands rerun and byte-compared");
  std::error_code ec;
  fs::remove_all(dir, ec);
}

CriterionResult run_one(int index, const std::string& name, double budget,
                        const std::function<void(Check&)>& body) {
  CriterionResult r;
  r.index = index;
  r.name = name;
  r.budget_seconds = budget;
  Check c;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  r.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget > 0.0 && r.seconds >= budget) c.expect(false, "over runtime budget");
  r.pass = c.ok;
  r.detail = c.detail.str();
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::string& cli_path) {
  std::vector<CriterionResult> results;
  results.push_back(run_one(1, "phase-history decoherence", 1.0, phase_decoherence));
  results.push_back(run_one(2, "energy-history triviality", 1.0, energy_triviality));
  results.push_back(run_one(3, "pure-endpoint coherence", 1.0, pure_endpoint_coherence));
  results.push_back(run_one(4, "sum-rule law", 10.0, sum_rule_law));
  results.push_back(run_one(5, "one-step averaged-map order", 30.0, povm_step_order_criterion));
  results.push_back(run_one(6, "unraveling consistency", 120.0, unraveling_consistency));
  results.push_back(run_one(7, "thermal stationarity", 10.0, thermal_stationarity));
  results.push_back(run_one(8, "time-symmetric functional", 10.0, time_symmetric_results));
  results.push_back(run_one(9, "relaxation decoherence", 10.0, relaxation_decoherence));
  results.push_back(run_one(10, "cosmology identities", 5.0, cosmology_identities));
  results.push_back(run_one(11, "typical-histories law", 120.0, typical_histories));
  results.push_back(run_one(12, "determinism", 0.0,
                            [&cli_path](Check& c) { determinism(c, cli_path); }));
  return results;
}

std::string format_report(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  for (const auto& r : results) {
    os << (r.pass ? "PASS" : "FAIL") << "  [" << r.index << "] " << r.name << "  ("
       << fmt(r.seconds) << " s)";
    if (!r.detail.empty()) os << "  -- " << r.detail;
    os << '\n';
  }
  return os.str();
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace decohist::selftest
