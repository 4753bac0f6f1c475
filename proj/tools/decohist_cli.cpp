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

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "decohist/runners.hpp"
#include "decohist/selftest.hpp"

namespace {

using decohist::Json;
using decohist::runners::RunTolerances;

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw decohist::ValidationError("cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw decohist::ValidationError("malformed JSON in '" + path + "': " + e.what());
  }
  return j;
}

struct Output {
  std::string path;    // empty = stdout
  std::string format;  // json | csv
};

void emit(const Json& artifact, const Output& out) {
  std::string text;
  if (out.format == "csv")
    text = decohist::runners::rows_to_csv(artifact);
  else
    text = artifact.dump(2) + "\n";
  if (out.path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out.path, std::ios::binary);
    if (!f) throw decohist::ValidationError("cannot write '" + out.path + "'");
    f << text;
  }
}

RunTolerances parse_tolerances(const std::vector<std::string>& overrides) {
  RunTolerances tol;
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw decohist::ValidationError("--tolerance expects k=v, got '" + kv + "'");
    tol.apply_override(kv.substr(0, eq), std::stod(kv.substr(eq + 1)));
  }
  return tol;
}

}  // namespace

int main(int argc, char** argv) {
  // Deterministic by default; DECOHIST_THREADS opts into Eigen parallelism.
  int n_threads = 1;
  if (const char* env = std::getenv("DECOHIST_THREADS")) {
    try {
      n_threads = std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      std::cerr << "error: DECOHIST_THREADS must be a positive integer\n";
      return 1;
    }
  }
  Eigen::setNbThreads(n_threads);

  CLI::App app{"decohist: decoherent-histories and open-quantum-system toolbox"};
  app.require_subcommand(1);

  std::string output_path;
  std::string format = "json";
  std::vector<std::string> tol_overrides;
  app.add_option("--output", output_path, "write the artifact here instead of stdout")
      ->capture_default_str();
  app.add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--tolerance", tol_overrides, "override a named tolerance, k=v");

  int levels = 4, steps = 2, events = 3;
  std::uint64_t seed = 0;
  auto* phase = app.add_subcommand("oscillator-phase", "phase-state history functional");
  phase->add_option("--N", levels, "number of levels")->required();
  phase->add_option("--steps", steps, "number of step-interval events")->required();
  phase->add_option("--seed", seed, "seed for the starting phase index");

  auto* energy = app.add_subcommand("oscillator-energy", "energy-eigenbasis histories");
  energy->add_option("--N", levels, "number of levels")->required();
  energy->add_option("--events", events, "number of events")->required();
  energy->add_option("--seed", seed, "seed for times and initial state");

  auto* mixed = app.add_subcommand("mixed-coherence", "ground-to-ground phase histories");
  mixed->add_option("--N", levels, "number of levels")->required();
  mixed->add_option("--steps", steps, "number of phase events")->required();

  std::string input_path;
  auto* func = app.add_subcommand("functional", "functional of a schedule file");
  func->add_option("--input", input_path, "schedule JSON")->required();

  auto* tsfunc = app.add_subcommand("ts-functional", "two-endpoint functional");
  tsfunc->add_option("--input", input_path, "schedule JSON with final_state")->required();

  std::string model_path, state_path;
  double t = 1.0, dt = 1e-3, horizon = 1.0, spacing = 1.0;
  int trajectories = 1000;
  std::string exact_oracle = "on";
  std::vector<double> dts;

  auto* prop = app.add_subcommand("lindblad-propagate", "exact master-equation evolution");
  prop->add_option("--model", model_path, "model JSON")->required();
  prop->add_option("--state", state_path, "initial state JSON (default maximally mixed)");
  prop->add_option("--t", t, "evolution time")->required();

  auto* jumps = app.add_subcommand("jump-ensemble", "jump-unraveled trajectory ensemble");
  jumps->add_option("--model", model_path, "model JSON")->required();
  jumps->add_option("--state", state_path, "initial state JSON (default maximally mixed)");
  jumps->add_option("--dt", dt, "step size")->required();
  jumps->add_option("--horizon", horizon, "evolution horizon")->required();
  jumps->add_option("--trajectories", trajectories, "ensemble size")->required();
  jumps->add_option("--seed", seed, "master seed");
  jumps->add_option("--exact-oracle", exact_oracle, "on|off")
      ->check(CLI::IsMember({"on", "off"}));

  auto* order = app.add_subcommand("povm-step-order", "one-step averaged-map error sweep");
  order->add_option("--model", model_path, "model JSON")->required();
  order->add_option("--state", state_path, "state JSON (default maximally mixed)");
  order->add_option("--dts", dts, "step sizes to sweep")->required();

  auto* relax = app.add_subcommand("relaxation", "history functional across relaxation");
  relax->add_option("--model", model_path, "model JSON")->required();
  relax->add_option("--spacing", spacing, "event spacing")->required();
  relax->add_option("--events", events, "number of events");
  relax->add_option("--seed", seed, "seed for the random projector family");

  double lambda0 = 3.0, lambda1 = 0.03, cc = 1.0;
  std::string lambda1_range;
  std::optional<double> brain_de, brain_ds;
  double brain_de_v = 0.0, brain_ds_v = 0.0;
  auto* cosmo_cmd = app.add_subcommand("cosmo", "de Sitter phases and reinflation measures");
  cosmo_cmd->add_option("--lambda0", lambda0, "high-phase cosmological term")->required();
  cosmo_cmd->add_option("--lambda1", lambda1, "low-phase cosmological term");
  cosmo_cmd->add_option("--lambda1-range", lambda1_range,
                        "sweep low phase: lo:hi:steps (log-spaced)");
  auto* de_opt = cosmo_cmd->add_option("--brain-dE", brain_de_v, "fluctuation energy");
  auto* ds_opt = cosmo_cmd->add_option("--brain-dS", brain_ds_v, "fluctuation entropy deficit");
  cosmo_cmd->add_option("--C", cc, "O(1) seed-radius constant");

  int dim = 8, samples = 100;
  std::vector<int> ranks;
  auto* random_cmd = app.add_subcommand("random-histories", "typical-history statistics");
  random_cmd->add_option("--dim", dim, "Hilbert-space dimension")->required();
  random_cmd->add_option("--events", events, "events per schedule")->required();
  random_cmd->add_option("--ranks", ranks, "rank partition of the dimension")->required();
  random_cmd->add_option("--samples", samples, "number of random schedules")->required();
  random_cmd->add_option("--seed", seed, "sampling seed");

  auto* selftest_cmd = app.add_subcommand("selftest", "run the full acceptance suite");

  // Let --output/--format/--tolerance appear after the subcommand.
  for (auto* sub : {phase, energy, mixed, func, tsfunc, prop, jumps, order, relax, cosmo_cmd,
                    random_cmd, selftest_cmd})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Normalize every parse failure (unknown subcommand, bad flag, missing
    // required option) to exit code 1; --help stays 0.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const RunTolerances tol = parse_tolerances(tol_overrides);
    const Output out{output_path, format};
    std::optional<Json> state_json;
    if (!state_path.empty()) state_json = load_json(state_path);

    if (phase->parsed()) {
      emit(decohist::runners::oscillator_phase(levels, steps, seed, tol), out);
    } else if (energy->parsed()) {
      emit(decohist::runners::oscillator_energy(levels, events, seed, tol), out);
    } else if (mixed->parsed()) {
      emit(decohist::runners::mixed_coherence(levels, steps, tol), out);
    } else if (func->parsed()) {
      emit(decohist::runners::functional_from_file(load_json(input_path), tol), out);
    } else if (tsfunc->parsed()) {
      emit(decohist::runners::ts_functional_from_file(load_json(input_path), tol), out);
    } else if (prop->parsed()) {
      emit(decohist::runners::lindblad_propagate(load_json(model_path), state_json, t), out);
    } else if (jumps->parsed()) {
      emit(decohist::runners::jump_ensemble(load_json(model_path), state_json, dt, horizon,
                                            trajectories, seed, exact_oracle == "on"),
           out);
    } else if (order->parsed()) {
      emit(decohist::runners::povm_step_order(load_json(model_path), state_json, dts), out);
    } else if (relax->parsed()) {
      emit(decohist::runners::relaxation(load_json(model_path), spacing, events, seed), out);
    } else if (cosmo_cmd->parsed()) {
      double lo = lambda1, hi = lambda1;
      int sweep_steps = 1;
      if (!lambda1_range.empty()) {
        const auto c1 = lambda1_range.find(':');
        const auto c2 = lambda1_range.find(':', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
          throw decohist::ValidationError("--lambda1-range expects lo:hi:steps");
        lo = std::stod(lambda1_range.substr(0, c1));
        hi = std::stod(lambda1_range.substr(c1 + 1, c2 - c1 - 1));
        sweep_steps = std::stoi(lambda1_range.substr(c2 + 1));
      }
      if (de_opt->count()) brain_de = brain_de_v;
      if (ds_opt->count()) brain_ds = brain_ds_v;
      emit(decohist::runners::cosmo_run(lambda0, lo, hi, sweep_steps, cc, brain_de, brain_ds),
           out);
    } else if (random_cmd->parsed()) {
      emit(decohist::runners::random_histories(dim, events, ranks, samples, seed), out);
    } else if (selftest_cmd->parsed()) {
      const auto results = decohist::selftest::run_acceptance(argv[0]);
      std::cout << decohist::selftest::format_report(results);
      return decohist::selftest::all_passed(results) ? 0 : 2;
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
