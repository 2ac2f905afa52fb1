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

#include "vnelab/report.hpp"

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vnelab/error.hpp"

namespace vnelab::cli {

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

const char* to_string(TaskStatus s) {
  switch (s) {
    case TaskStatus::kPass:
      return "pass";
    case TaskStatus::kFail:
      return "fail";
    case TaskStatus::kError:
      return "error";
  }
  return "error";
}

namespace {

TaskStatus status_from(const std::string& s) {
  if (s == "pass") return TaskStatus::kPass;
  if (s == "fail") return TaskStatus::kFail;
  if (s == "error") return TaskStatus::kError;
  throw InvalidArgument("report: unknown task status '" + s + "'");
}

// JSON has no NaN or infinity; they are written as strings.
json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double from_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  throw InvalidArgument("report: expected a number, got " + j.dump());
}

}  // namespace

bool operator==(const Quantity& a, const Quantity& b) {
  const bool same_value = (std::isnan(a.value) && std::isnan(b.value)) || a.value == b.value;
  return same_value && a.quantity == b.quantity && a.threshold == b.threshold &&
         a.pass == b.pass;
}

void TaskResult::add(std::string name, double value, std::optional<double> threshold) {
  const double v = round12(value);
  const bool pass = !threshold || (std::isfinite(v) && v <= *threshold);
  quantities.push_back({std::move(name), v, threshold, pass});
}

void TaskResult::settle() {
  if (status == TaskStatus::kError) return;
  status = TaskStatus::kPass;
  for (const auto& q : quantities)
    if (!q.pass) status = TaskStatus::kFail;
}

bool Report::passed() const { return exit_code() == kExitPass; }

int Report::exit_code() const {
  int code = kExitPass;
  for (const auto& t : tasks) {
    if (t.status == TaskStatus::kError) return kExitSolverFailure;
    if (t.status == TaskStatus::kFail) code = kExitVerificationFailure;
  }
  return code;
}

json to_json(const Report& r) {
  json tasks = json::array();
  int failed = 0;
  for (const auto& t : r.tasks) {
    json qs = json::array();
    for (const auto& q : t.quantities)
      qs.push_back({{"quantity", q.quantity},
                    {"value", number(q.value)},
                    {"threshold", q.threshold ? json(*q.threshold) : json(nullptr)},
                    {"pass", q.pass}});
    json tj = {{"id", t.id},         {"type", t.type},   {"status", to_string(t.status)},
               {"quantities", qs},   {"notes", t.notes}, {"data", t.data}};
    if (t.wall_seconds) tj["wall_seconds"] = *t.wall_seconds;
    if (t.status != TaskStatus::kPass) ++failed;
    tasks.push_back(std::move(tj));
  }
  json j = {{"tool", r.tool},
            {"version", r.version},
            {"schema", r.schema},
            {"scenario", r.scenario},
            {"scenario_digest", r.digest},
            {"seed", r.seed},
            {"tolerances", {{"sdp", r.sdp_tol}, {"verify", r.verify_tol}, {"max_iter", r.max_iter}}},
            {"tasks", tasks},
            {"summary",
             {{"tasks", r.tasks.size()}, {"not_passed", failed}, {"exit_code", r.exit_code()}}}};
  if (r.timestamp) j["timestamp"] = *r.timestamp;
  return j;
}

Report report_from_json(const json& j) {
  try {
    Report r;
    r.tool = j.at("tool").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.schema = j.at("schema").get<int>();
    r.scenario = j.at("scenario").get<std::string>();
    r.digest = j.at("scenario_digest").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.sdp_tol = j.at("tolerances").at("sdp").get<double>();
    r.verify_tol = j.at("tolerances").at("verify").get<double>();
    r.max_iter = j.at("tolerances").at("max_iter").get<int>();
    if (j.contains("timestamp")) r.timestamp = j["timestamp"].get<std::string>();
    for (const auto& tj : j.at("tasks")) {
      TaskResult t;
      t.id = tj.at("id").get<std::string>();
      t.type = tj.at("type").get<std::string>();
      t.status = status_from(tj.at("status").get<std::string>());
      for (const auto& qj : tj.at("quantities")) {
        Quantity q;
        q.quantity = qj.at("quantity").get<std::string>();
        q.value = from_number(qj.at("value"));
        if (!qj.at("threshold").is_null()) q.threshold = qj["threshold"].get<double>();
        q.pass = qj.at("pass").get<bool>();
        t.quantities.push_back(std::move(q));
      }
      t.notes = tj.at("notes").get<std::vector<std::string>>();
      t.data = tj.at("data");
      if (tj.contains("wall_seconds")) t.wall_seconds = tj["wall_seconds"].get<double>();
      r.tasks.push_back(std::move(t));
    }
    return r;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("report: ") + e.what());
  }
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt12(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string render(const Report& r, Format f) {
  if (f == Format::kJson) return to_json(r).dump(2) + "\n";
  std::ostringstream os;
  os << "task,quantity,value,threshold,pass\n";
  for (const auto& t : r.tasks)
    for (const auto& q : t.quantities)
      os << csv_field(t.id) << ',' << csv_field(q.quantity) << ',' << fmt12(q.value) << ','
         << (q.threshold ? fmt12(*q.threshold) : "") << ',' << (q.pass ? "true" : "false")
         << '\n';
  return os.str();
}

void emit_report(const Report& r, Format f, const std::filesystem::path& out) {
  const std::string text = render(r, f);
  std::filesystem::path tmp = out;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + tmp.string() + " for writing");
    os << text;
    os.flush();
    if (!os) throw Error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, out, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot move report into place at " + out.string() + ": " + ec.message());
  }
}

}  // namespace vnelab::cli
