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

#include <optional>
#include <string>

#include <json.hpp>

#include "decohist/histories.hpp"
#include "decohist/openquantum.hpp"

namespace decohist {

using Json = nlohmann::ordered_json;

/// {"dim": d, "re": [[...]], "im": [[...]]}
Json operator_to_json(const Mat& m);
Mat operator_from_json(const Json& j);

struct ScheduleFile {
  EventSchedule schedule;
  Mat initial_state;
  std::optional<Mat> final_state;
};

/// {"dim", "initial_state", "final_state"?, "events": [{"t", "family",
/// "kind"}], "propagator": {"hamiltonian": op} | {"unitaries": [op...]}}.
/// Unknown fields are rejected.
ScheduleFile schedule_from_json(const Json& j);

/// {"dim", "H": op, "channels": [{"L": op, "gamma": g}]}
LindbladModel model_from_json(const Json& j);
Json model_to_json(const LindbladModel& model);

/// {labels, D_re, D_im, probabilities, max_ratio, "decoherent@epsilon"}
Json functional_report(const DecoherenceFunctional& d, double epsilon);

void reject_unknown_fields(const Json& j, const std::vector<std::string>& allowed,
                           const std::string& where);

}  // namespace decohist
