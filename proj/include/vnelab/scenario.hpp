// Copyright 2026 The vnelab Authors.
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

// Scenario files: named groups, couplings and multipliers plus an ordered
// task list. See README.md for the schema.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vnelab/action.hpp"
#include "vnelab/error.hpp"
#include "vnelab/group.hpp"
#include "vnelab/multiplier.hpp"
#include "vnelab/report.hpp"

namespace vnelab::cli {

/// Malformed scenario: bad JSON, schema violation or unresolved name. The
/// message carries the line/column or the JSON path of the offending field.
class ScenarioError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> max_iter;
  bool timestamps = true;
};

struct TaskSpec {
  std::string id;
  std::string type;
  json fields;
};

struct Scenario {
  std::string name;
  std::string digest;
  std::uint64_t seed = 0;
  double sdp_tol = 1e-7;
  double verify_tol = 1e-6;
  int max_iter = 200;
  std::map<std::string, GroupPtr> groups;
  std::map<std::string, CouplingRecord> couplings;
  /// A multiplier entry is a family; most have one member.
  std::map<std::string, std::vector<GroupFunction>> multipliers;
  std::vector<TaskSpec> tasks;
};

/// Parses and resolves a scenario. `source` names the input in messages.
Scenario parse_scenario(const std::string& text, const std::string& source,
                        const Overrides& overrides = {});

Scenario load_scenario(const std::filesystem::path& path, const Overrides& overrides = {});

/// Executes the tasks in order. Solver failures become failed tasks.
Report run(const Scenario& s, const Overrides& overrides = {});

/// load_scenario followed by run.
Report run_scenario(const std::filesystem::path& path, const Overrides& overrides = {});

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

}  // namespace vnelab::cli
