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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "decohist/cosmo.hpp"
#include "decohist/ensembles.hpp"
#include "decohist/runners.hpp"

namespace py = pybind11;

namespace {

using decohist::Json;

// Round-trip through the Python json module keeps the two representations
// in lockstep without a hand-written converter.
Json py_to_json(const py::object& obj) {
  const auto dumps = py::module_::import("json").attr("dumps");
  return Json::parse(dumps(obj).cast<std::string>());
}

py::object json_to_py(const Json& j) {
  const auto loads = py::module_::import("json").attr("loads");
  return loads(j.dump());
}

std::optional<Json> optional_json(const py::object& obj) {
  if (obj.is_none()) return std::nullopt;
  return py_to_json(obj);
}

decohist::runners::RunTolerances tolerances(double epsilon) {
  decohist::runners::RunTolerances tol;
  tol.epsilon = epsilon;
  return tol;
}

}  // namespace

PYBIND11_MODULE(_decohist, m) {
  m.doc() = "decoherent-histories and open-quantum-system toolbox";

  // Low-level linear algebra.
  m.def(
      "matrix_exponential",
      [](const decohist::Mat& h, double t) { return decohist::matrix_exponential(h, t); },
      py::arg("hermitian"), py::arg("t"), "exp(-i H t) for a Hermitian generator");
  m.def(
      "polar_decompose",
      [](const decohist::Mat& l) {
        const auto parts = decohist::polar_decompose(l);
        return py::make_tuple(parts.unitary, parts.positive);
      },
      py::arg("matrix"), "Polar decomposition L = U A, returns (U, A)");
  m.def("hermitian_sqrt", &decohist::hermitian_sqrt, py::arg("psd_matrix"));
  m.def("trace_distance", &decohist::trace_distance, py::arg("a"), py::arg("b"));
  m.def(
      "haar_unitary",
      [](Eigen::Index d, std::uint64_t seed) {
        decohist::CounterRng rng(seed);
        return decohist::haar_unitary(d, rng);
      },
      py::arg("dim"), py::arg("seed"));

  // History functionals and scenario runners; dict in, dict out.
  m.def(
      "oscillator_phase",
      [](int levels, int steps, std::uint64_t seed, double epsilon) {
        return json_to_py(
            decohist::runners::oscillator_phase(levels, steps, seed, tolerances(epsilon)));
      },
      py::arg("levels"), py::arg("steps"), py::arg("seed") = 0, py::arg("epsilon") = 1e-6);
  m.def(
      "oscillator_energy",
      [](int levels, int events, std::uint64_t seed, double epsilon) {
        return json_to_py(
            decohist::runners::oscillator_energy(levels, events, seed, tolerances(epsilon)));
      },
      py::arg("levels"), py::arg("events"), py::arg("seed") = 0, py::arg("epsilon") = 1e-6);
  m.def(
      "mixed_coherence",
      [](int levels, int steps, double epsilon) {
        return json_to_py(
            decohist::runners::mixed_coherence(levels, steps, tolerances(epsilon)));
      },
      py::arg("levels"), py::arg("steps"), py::arg("epsilon") = 1e-6);
  m.def(
      "functional",
      [](const py::object& schedule, double epsilon) {
        return json_to_py(
            decohist::runners::functional_from_file(py_to_json(schedule), tolerances(epsilon)));
      },
      py::arg("schedule"), py::arg("epsilon") = 1e-6);
  m.def(
      "ts_functional",
      [](const py::object& schedule, double epsilon) {
        return json_to_py(decohist::runners::ts_functional_from_file(py_to_json(schedule),
                                                                     tolerances(epsilon)));
      },
      py::arg("schedule"), py::arg("epsilon") = 1e-6);

  // Open-system dynamics.
  m.def(
      "lindblad_propagate",
      [](const py::object& model, double t, const py::object& state) {
        return json_to_py(
            decohist::runners::lindblad_propagate(py_to_json(model), optional_json(state), t));
      },
      py::arg("model"), py::arg("t"), py::arg("state") = py::none());
  m.def(
      "jump_ensemble",
      [](const py::object& model, double dt, double horizon, int trajectories,
         std::uint64_t seed, bool exact_oracle, const py::object& state) {
        return json_to_py(decohist::runners::jump_ensemble(py_to_json(model),
                                                           optional_json(state), dt, horizon,
                                                           trajectories, seed, exact_oracle));
      },
      py::arg("model"), py::arg("dt"), py::arg("horizon"), py::arg("trajectories"),
      py::arg("seed") = 0, py::arg("exact_oracle") = true, py::arg("state") = py::none());
  m.def(
      "povm_step_order",
      [](const py::object& model, const std::vector<double>& dts, const py::object& state) {
        return json_to_py(
            decohist::runners::povm_step_order(py_to_json(model), optional_json(state), dts));
      },
      py::arg("model"), py::arg("dts"), py::arg("state") = py::none());
  m.def(
      "relaxation",
      [](const py::object& model, double spacing, int events, std::uint64_t seed) {
        return json_to_py(
            decohist::runners::relaxation(py_to_json(model), spacing, events, seed));
      },
      py::arg("model"), py::arg("spacing"), py::arg("events") = 2, py::arg("seed") = 0);

  // Cosmology.
  m.def(
      "de_sitter",
      [](double lambda) {
        const auto p = decohist::cosmo::de_sitter_from_lambda(lambda);
        py::dict out;
        out["lambda"] = p.lambda;
        out["horizon_length"] = p.horizon_length;
        out["temperature"] = p.temperature;
        out["entropy"] = p.entropy;
        return out;
      },
      py::arg("lam"));
  m.def("reinflation_log_probability",
        [](double lambda0, double lambda1, double c) {
          return decohist::cosmo::reinflation_log_probability({lambda0, lambda1, c});
        },
        py::arg("lambda0"), py::arg("lambda1"), py::arg("C") = 1.0);
  m.def(
      "cosmo",
      [](double lambda0, double lambda1_lo, double lambda1_hi, int sweep_steps, double c,
         const py::object& brain_de, const py::object& brain_ds) {
        std::optional<double> de, ds;
        if (!brain_de.is_none()) de = brain_de.cast<double>();
        if (!brain_ds.is_none()) ds = brain_ds.cast<double>();
        return json_to_py(
            decohist::runners::cosmo_run(lambda0, lambda1_lo, lambda1_hi, sweep_steps, c, de, ds));
      },
      py::arg("lambda0"), py::arg("lambda1_lo"), py::arg("lambda1_hi"),
      py::arg("sweep_steps") = 1, py::arg("C") = 1.0, py::arg("brain_dE") = py::none(),
      py::arg("brain_dS") = py::none());

  // Random-history ensembles.
  m.def(
      "random_histories",
      [](int dim, int events, const std::vector<int>& ranks, int samples,
         std::uint64_t seed) {
        return json_to_py(
            decohist::runners::random_histories(dim, events, ranks, samples, seed));
      },
      py::arg("dim"), py::arg("events"), py::arg("ranks"), py::arg("samples"),
      py::arg("seed") = 0);
}
