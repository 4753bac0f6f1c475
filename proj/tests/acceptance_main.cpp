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

#include <iostream>

#include "decohist/selftest.hpp"

#ifndef DECOHIST_CLI_PATH
#define DECOHIST_CLI_PATH ""
#endif

int main() {
  const auto results = decohist::selftest::run_acceptance(DECOHIST_CLI_PATH);
  std::cout << decohist::selftest::format_report(results);
  return decohist::selftest::all_passed(results) ? 0 : 1;
}
