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

// vnelab: run scenario files and write reports.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <vector>

#include "vnelab/report.hpp"
#include "vnelab/scenario.hpp"

namespace fs = std::filesystem;
using namespace vnelab::cli;

namespace {

int run_one(const fs::path& path, const Overrides& ov, Format fmt,
            const std::optional<fs::path>& out) {
  const Report r = run_scenario(path, ov);
  if (out)
    emit_report(r, fmt, *out);
  else
    std::cout << render(r, fmt);
  return r.exit_code();
}

std::vector<fs::path> bundled(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-group coupling and multiplier laboratory"};
  app.set_version_flag("--version", VNELAB_VERSION);
  app.require_subcommand(1);

  Overrides ov;
  std::string scenario, format = "json", out;
  std::uint64_t seed = 0;
  double tol = 0.0;
  int max_iter = 0;
  bool no_timestamp = false;

  auto* run = app.add_subcommand("run", "Run one scenario file");
  run->add_option("scenario", scenario, "Scenario JSON file")->required();
  run->add_option("--out", out, "Write the report here instead of stdout");
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
  auto* tol_opt = run->add_option("--tol", tol, "Override the SDP tolerance")
                      ->check(CLI::PositiveNumber);
  auto* iter_opt = run->add_option("--max-iter", max_iter, "Override the SDP iteration cap")
                       ->check(CLI::PositiveNumber);
  run->add_flag("--no-timestamp", no_timestamp, "Omit timestamps and wall-clock times");

  std::string dir = VNELAB_SCENARIO_DIR, out_dir;
  auto* all = app.add_subcommand("verify-all", "Run every bundled scenario");
  all->add_option("--dir", dir, "Scenario directory")->check(CLI::ExistingDirectory);
  all->add_option("--out-dir", out_dir, "Write one JSON report per scenario here");
  all->add_flag("--no-timestamp", no_timestamp, "Omit timestamps and wall-clock times");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInputError;
  }

  ov.timestamps = !no_timestamp;
  if (*seed_opt) ov.seed = seed;
  if (*tol_opt) ov.tol = tol;
  if (*iter_opt) ov.max_iter = max_iter;

  try {
    if (*run) {
      std::optional<fs::path> dest;
      if (!out.empty()) dest = out;
      return run_one(scenario, ov, format == "csv" ? Format::kCsv : Format::kJson, dest);
    }
    int worst = kExitPass;
    const auto files = bundled(dir);
    if (files.empty()) {
      std::cerr << "vnelab: no scenarios in " << dir << "\n";
      return kExitInputError;
    }
    if (!out_dir.empty()) fs::create_directories(out_dir);
    for (const auto& f : files) {
      const Report r = run_scenario(f, ov);
      if (!out_dir.empty())
        emit_report(r, Format::kJson, fs::path(out_dir) / f.filename());
      int failed = 0;
      for (const auto& t : r.tasks) failed += t.status != TaskStatus::kPass;
      std::cout << (r.passed() ? "PASS " : "FAIL ") << f.filename().string() << "  ("
                << r.tasks.size() - failed << "/" << r.tasks.size() << " tasks)\n";
      for (const auto& t : r.tasks)
        if (t.status != TaskStatus::kPass) {
          std::cout << "  " << to_string(t.status) << " " << t.id << "\n";
          for (const auto& n : t.notes) std::cout << "    " << n << "\n";
        }
      worst = std::max(worst, r.exit_code());
    }
    return worst;
  } catch (const ScenarioError& e) {
    std::cerr << "vnelab: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "vnelab: " << e.what() << "\n";
    return kExitInputError;
  }
}
