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

// Scenario reports and their JSON / CSV renderings.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace vnelab::cli {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Exit codes of the command line tool.
enum ExitCode : int {
  kExitPass = 0,
  kExitVerificationFailure = 1,
  kExitInputError = 2,
  kExitSolverFailure = 3,
};

/// Rounds to 12 significant digits. Every number stored in a report goes
/// through this, so a report survives a JSON round trip unchanged.
double round12(double v);

struct Quantity {
  std::string quantity;
  double value = 0.0;
  std::optional<double> threshold;
  bool pass = true;

  /// NaN values (recorded for failed solves) compare equal to each other.
  friend bool operator==(const Quantity& a, const Quantity& b);
};

enum class TaskStatus { kPass, kFail, kError };

const char* to_string(TaskStatus s);

struct TaskResult {
  std::string id;
  std::string type;
  TaskStatus status = TaskStatus::kPass;
  std::vector<Quantity> quantities;
  std::vector<std::string> notes;
  json data = json::object();
  std::optional<double> wall_seconds;

  /// Adds a rounded quantity; a check fails when value > threshold or the
  /// value is not finite.
  void add(std::string name, double value, std::optional<double> threshold = std::nullopt);
  /// Sets the status from the quantities unless it is already kError.
  void settle();

  friend bool operator==(const TaskResult&, const TaskResult&) = default;
};

struct Report {
  std::string tool = "vnelab";
  std::string version;
  int schema = kSchemaVersion;
  std::string scenario;
  std::string digest;
  std::uint64_t seed = 0;
  double sdp_tol = 0.0;
  double verify_tol = 0.0;
  int max_iter = 0;
  std::optional<std::string> timestamp;
  std::vector<TaskResult> tasks;

  bool passed() const;
  /// 3 if any task hit a solver failure, else 1 if any check failed, else 0.
  int exit_code() const;

  friend bool operator==(const Report&, const Report&) = default;
};

json to_json(const Report& r);
/// Inverse of to_json; throws InvalidArgument on malformed input.
Report report_from_json(const json& j);

enum class Format { kJson, kCsv };

/// JSON with sorted keys, or CSV with header task,quantity,value,threshold,pass.
std::string render(const Report& r, Format f);

/// Writes atomically (temporary file in the same directory, then rename).
/// Throws Error with the path on I/O failure.
void emit_report(const Report& r, Format f, const std::filesystem::path& out);

}  // namespace vnelab::cli
