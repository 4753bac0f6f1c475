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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "decohist/runners.hpp"
#include "decohist/rng.hpp"
#include "decohist/schedule_io.hpp"

using namespace decohist;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() /
                 ("decohist-io-test-" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  REQUIRE(f.good());
  f << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DECOHIST_CLI_PATH) + " " + args +
                          " > /dev/null 2> /dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

Mat pauli_z() {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

Json qubit_schedule_json() {
  Mat p0 = Mat::Zero(2, 2);
  p0(0, 0) = 1.0;
  Mat p1 = Mat::Zero(2, 2);
  p1(1, 1) = 1.0;
  Mat px = Mat::Constant(2, 2, 0.5);
  Mat pmx = px;
  pmx(0, 1) = -0.5;
  pmx(1, 0) = -0.5;
  Json j;
  j["dim"] = 2;
  j["initial_state"] = operator_to_json(p0);
  j["initial_time"] = -0.5;
  j["events"] = Json::array(
      {Json{{"t", 0.0}, {"family", Json::array({operator_to_json(px), operator_to_json(pmx)})}},
       Json{{"t", 0.75},
            {"family", Json::array({operator_to_json(p0), operator_to_json(p1)})}}});
  j["propagator"] = Json{{"hamiltonian", operator_to_json(pauli_z())}};
  return j;
}

Json damping_model_json() {
  Json j;
  j["dim"] = 2;
  j["H"] = operator_to_json(Mat::Zero(2, 2));
  Mat lower = Mat::Zero(2, 2);
  lower(0, 1) = 1.0;
  j["channels"] = Json::array({Json{{"L", operator_to_json(lower)}, {"gamma", 1.0}}});
  return j;
}

}  // namespace

TEST_CASE("operator JSON round trip preserves every entry") {
  CounterRng rng(17);
  Mat m(3, 3);
  for (Eigen::Index j = 0; j < 3; ++j)
    for (Eigen::Index i = 0; i < 3; ++i)
      m(i, j) = Complex(rng.next_normal(), rng.next_normal());
  const Mat back = operator_from_json(operator_to_json(m));
  CHECK((back - m).norm() == 0.0);
}

TEST_CASE("operator JSON rejects inconsistent shapes and unknown fields") {
  Json good = operator_to_json(Mat::Identity(2, 2));
  Json bad_dim = good;
  bad_dim["dim"] = 3;
  CHECK_THROWS(operator_from_json(bad_dim));
  Json extra = good;
  extra["units"] = "planck";
  CHECK_THROWS(operator_from_json(extra));
  Json ragged = good;
  ragged["re"][0] = Json::array({1.0});
  CHECK_THROWS(operator_from_json(ragged));
}

TEST_CASE("schedule JSON round trip drives the functional") {
  const auto sf = schedule_from_json(qubit_schedule_json());
  CHECK(sf.schedule.dim() == 2);
  CHECK(!sf.final_state.has_value());
  const auto d = decoherence_functional(sf.schedule, sf.initial_state);
  CHECK(d.labels.size() == 4);
  double total = 0.0;
  for (Eigen::Index i = 0; i < d.matrix.rows(); ++i) total += d.matrix(i, i).real();
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("schedule JSON rejects unknown fields and bad event kinds") {
  Json extra = qubit_schedule_json();
  extra["comment"] = "hello";
  CHECK_THROWS(schedule_from_json(extra));

  Json bad_kind = qubit_schedule_json();
  bad_kind["events"][0]["kind"] = "weak";
  CHECK_THROWS(schedule_from_json(bad_kind));

  Json bad_prop = qubit_schedule_json();
  bad_prop["propagator"] = Json{{"liouvillian", 1}};
  CHECK_THROWS(schedule_from_json(bad_prop));
}

TEST_CASE("lindblad model JSON round trip") {
  const auto model = model_from_json(damping_model_json());
  CHECK(model.dim() == 2);
  CHECK(model.channels.size() == 1);
  CHECK(model.channels[0].rate == 1.0);
  const Json back = model_to_json(model);
  const auto again = model_from_json(back);
  CHECK((again.hamiltonian - model.hamiltonian).norm() == 0.0);
  CHECK((again.channels[0].op - model.channels[0].op).norm() == 0.0);

  Json bad = damping_model_json();
  bad["channels"][0]["rate"] = 1.0;  // unknown channel field
  CHECK_THROWS(model_from_json(bad));
}

TEST_CASE("functional report carries the full matrix and verdict") {
  const auto sf = schedule_from_json(qubit_schedule_json());
  const auto d = decoherence_functional(sf.schedule, sf.initial_state);
  const Json rep = functional_report(d, 1e-6);
  REQUIRE(rep.contains("labels"));
  REQUIRE(rep.contains("D_re"));
  REQUIRE(rep.contains("D_im"));
  REQUIRE(rep.contains("probabilities"));
  REQUIRE(rep.contains("max_ratio"));
  REQUIRE(rep.contains("decoherent"));
  CHECK(rep["labels"].size() == 4);
  CHECK(rep["D_re"].size() == 4);
  CHECK(rep["probabilities"].size() == 4);
  double total = 0.0;
  for (const auto& p : rep["probabilities"]) total += p.get<double>();
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("rows_to_csv renders the tabular part of an artifact") {
  Json artifact;
  artifact["columns"] = Json::array({"a", "b"});
  artifact["rows"] = Json::array({Json::array({1, 2.5}), Json::array({3, "jump"})});
  const std::string csv = runners::rows_to_csv(artifact);
  CHECK(csv.find("a,b\n") == 0);
  CHECK(csv.find("1,2.5") != std::string::npos);
  CHECK(csv.find("3,jump") != std::string::npos);

  Json no_rows;
  no_rows["value"] = 1;
  CHECK_THROWS(runners::rows_to_csv(no_rows));
}

TEST_CASE("cli: a valid run exits 0 and writes parseable JSON") {
  const fs::path out = scratch_dir() / "cosmo.json";
  const int rc = run_cli("cosmo --lambda0 3 --lambda1 0.03 --C 1 --output " + out.string());
  CHECK(rc == 0);
  const Json j = Json::parse(read_file(out));
  CHECK(j.contains("rows"));
  CHECK(j["config"]["subcommand"] == "cosmo");
}

TEST_CASE("cli: repeated runs with the same seed are byte-identical") {
  const fs::path a = scratch_dir() / "phase_a.json";
  const fs::path b = scratch_dir() / "phase_b.json";
  CHECK(run_cli("oscillator-phase --N 8 --steps 3 --seed 12 --output " + a.string()) == 0);
  CHECK(run_cli("oscillator-phase --N 8 --steps 3 --seed 12 --output " + b.string()) == 0);
  CHECK(read_file(a) == read_file(b));
  CHECK(!read_file(a).empty());
}

TEST_CASE("cli: csv format emits the tabular artifact") {
  const fs::path model = scratch_dir() / "model.json";
  write_file(model, damping_model_json().dump());
  const fs::path out = scratch_dir() / "sweep.csv";
  const int rc = run_cli("povm-step-order --model " + model.string() +
                         " --dts 0.1 --dts 0.01 --format csv --output " + out.string());
  CHECK(rc == 0);
  const std::string csv = read_file(out);
  CHECK(csv.rfind("dt,", 0) == 0);
}

TEST_CASE("cli: unknown subcommand exits 1") {
  CHECK(run_cli("does-not-exist") == 1);
  CHECK(run_cli("") == 1);  // a subcommand is required
}

TEST_CASE("cli: missing required option exits 1") {
  CHECK(run_cli("oscillator-phase --steps 2") == 1);
}

TEST_CASE("cli: malformed input JSON exits 1") {
  const fs::path broken = scratch_dir() / "broken.json";
  write_file(broken, "{\"dim\": 2, ");
  CHECK(run_cli("functional --input " + broken.string()) == 1);
  CHECK(run_cli("functional --input " + (scratch_dir() / "missing.json").string()) == 1);
}

TEST_CASE("cli: semantically invalid input exits 1") {
  const fs::path bad = scratch_dir() / "bad_schedule.json";
  Json j = qubit_schedule_json();
  j["events"][0]["family"][0]["re"][0][0] = 0.9;  // no longer a projector
  write_file(bad, j.dump());
  CHECK(run_cli("functional --input " + bad.string()) == 1);
}
