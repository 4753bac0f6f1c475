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

#include "decohist/schedule_io.hpp"

#include <algorithm>

namespace decohist {

void reject_unknown_fields(const Json& j, const std::vector<std::string>& allowed,
                           const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ValidationError(where + ": unknown field '" + key + "'");
  }
}

Json operator_to_json(const Mat& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json re_row = Json::array();
    Json im_row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return Json{{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

Mat operator_from_json(const Json& j) {
  reject_unknown_fields(j, {"dim", "re", "im"}, "operator");
  const Eigen::Index d = j.at("dim").get<Eigen::Index>();
  if (d < 1) throw ValidationError("operator: dim must be >= 1");
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != static_cast<std::size_t>(d) || im.size() != static_cast<std::size_t>(d))
    throw ValidationError("operator: row count does not match dim");
  Mat m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& re_row = re.at(i);
    const auto& im_row = im.at(i);
    if (re_row.size() != static_cast<std::size_t>(d) ||
        im_row.size() != static_cast<std::size_t>(d))
      throw ValidationError("operator: column count does not match dim");
    for (Eigen::Index k = 0; k < d; ++k)
      m(i, k) = Complex(re_row.at(k).get<double>(), im_row.at(k).get<double>());
  }
  require_finite(m, "operator");
  return m;
}

ScheduleFile schedule_from_json(const Json& j) {
  reject_unknown_fields(j,
                        {"dim", "initial_state", "final_state", "events", "propagator",
                         "initial_time", "final_time"},
                        "schedule");
  const Eigen::Index dim = j.at("dim").get<Eigen::Index>();
  const Mat rho_i = operator_from_json(j.at("initial_state"));
  if (rho_i.rows() != dim) throw ValidationError("schedule: initial_state dimension mismatch");

  std::optional<Mat> rho_f;
  if (j.contains("final_state")) rho_f = operator_from_json(j.at("final_state"));

  std::vector<Event> events;
  for (const auto& je : j.at("events")) {
    reject_unknown_fields(je, {"t", "family", "kind"}, "event");
    Event e;
    e.time = je.at("t").get<double>();
    const std::string kind = je.value("kind", "projective");
    if (kind == "projective")
      e.kind = FamilyKind::Projective;
    else if (kind == "kraus")
      e.kind = FamilyKind::Kraus;
    else
      throw ValidationError("event: kind must be 'projective' or 'kraus'");
    for (const auto& jop : je.at("family")) e.family.push_back(operator_from_json(jop));
    events.push_back(std::move(e));
  }

  const auto& prop = j.at("propagator");
  std::optional<double> final_time;
  if (j.contains("final_time")) final_time = j.at("final_time").get<double>();

  std::optional<EventSchedule> schedule;
  if (prop.contains("hamiltonian")) {
    reject_unknown_fields(prop, {"hamiltonian"}, "propagator");
    const double t0 = j.value("initial_time", events.empty() ? 0.0 : events.front().time);
    schedule = EventSchedule::with_hamiltonian(dim, std::move(events),
                                               operator_from_json(prop.at("hamiltonian")),
                                               t0, final_time);
  } else if (prop.contains("unitaries")) {
    reject_unknown_fields(prop, {"unitaries"}, "propagator");
    std::vector<Mat> unitaries;
    for (const auto& ju : prop.at("unitaries")) unitaries.push_back(operator_from_json(ju));
    schedule = EventSchedule::with_unitaries(dim, std::move(events), std::move(unitaries));
  } else {
    throw ValidationError("schedule: propagator needs 'hamiltonian' or 'unitaries'");
  }
  return ScheduleFile{std::move(*schedule), rho_i, rho_f};
}

LindbladModel model_from_json(const Json& j) {
  reject_unknown_fields(j, {"dim", "H", "channels"}, "lindblad model");
  const Eigen::Index dim = j.at("dim").get<Eigen::Index>();
  Mat h = operator_from_json(j.at("H"));
  if (h.rows() != dim) throw ValidationError("lindblad model: H dimension mismatch");
  std::vector<LindbladChannel> channels;
  for (const auto& jc : j.at("channels")) {
    reject_unknown_fields(jc, {"L", "gamma"}, "lindblad channel");
    channels.push_back({operator_from_json(jc.at("L")), jc.at("gamma").get<double>()});
  }
  return LindbladModel::checked(std::move(h), std::move(channels));
}

Json model_to_json(const LindbladModel& model) {
  Json channels = Json::array();
  for (const auto& c : model.channels)
    channels.push_back(Json{{"L", operator_to_json(c.op)}, {"gamma", c.rate}});
  return Json{{"dim", model.dim()},
              {"H", operator_to_json(model.hamiltonian)},
              {"channels", std::move(channels)}};
}

Json functional_report(const DecoherenceFunctional& d, double epsilon) {
  Json labels = Json::array();
  for (const auto& lab : d.labels) labels.push_back(lab);
  const Eigen::Index n = d.matrix.rows();
  Json d_re = Json::array();
  Json d_im = Json::array();
  for (Eigen::Index i = 0; i < n; ++i) {
    Json re_row = Json::array();
    Json im_row = Json::array();
    for (Eigen::Index j2 = 0; j2 < n; ++j2) {
      re_row.push_back(d.matrix(i, j2).real());
      im_row.push_back(d.matrix(i, j2).imag());
    }
    d_re.push_back(std::move(re_row));
    d_im.push_back(std::move(im_row));
  }
  Json probabilities = Json::array();
  for (Eigen::Index i = 0; i < n; ++i)
    probabilities.push_back(std::max(d.matrix(i, i).real(), 0.0));

  const auto verdict = is_decoherent(d, epsilon);
  Json out;
  out["labels"] = std::move(labels);
  out["D_re"] = std::move(d_re);
  out["D_im"] = std::move(d_im);
  out["probabilities"] = std::move(probabilities);
  out["max_ratio"] = verdict.max_ratio;
  out["epsilon"] = epsilon;
  out["decoherent"] = verdict.decoherent;
  if (d.time_symmetric) out["normalization"] = d.normalization;
  return out;
}

}  // namespace decohist
