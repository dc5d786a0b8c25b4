// Copyright 2026 The Artiprop Authors
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

// Command line front end: run, validate and sweep scenario files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "artiprop/batch.hpp"
#include "artiprop/errors.hpp"
#include "artiprop/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

namespace fs = std::filesystem;
using artiprop::ScenarioEntries;

std::string readFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw artiprop::Error("cannot read scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// `--set key=value` plus the dedicated flags, as scenario entries.
ScenarioEntries collectOverrides(const std::vector<std::string>& sets,
                                 std::optional<long long> replicates,
                                 std::optional<long long> seed) {
  ScenarioEntries out;
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw artiprop::ValidationError(s, "expected key=value");
    }
    std::string key = s.substr(0, eq);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    out[key] = artiprop::parseScenarioValue(s.substr(eq + 1));
  }
  if (replicates) {
    out["replicates"].data = static_cast<double>(*replicates);
  }
  if (seed) out["seed_base"].data = static_cast<double>(*seed);
  return out;
}

void printSummary(const artiprop::BatchReport& report) {
  const auto& a = report.aggregate;
  std::printf("%s: %d episodes, success rate %.3f, median steps %g, "
              "median axis error %.3f deg",
              report.scenario.c_str(), a.episodes, a.success_rate,
              a.median_steps, a.median_axis_direction_error);
  if (a.median_axis_position_error) {
    std::printf(" / %.4f m", *a.median_axis_position_error);
  }
  std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proprioceptive opening of articulated objects"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = ".";
  std::optional<long long> replicates;
  std::optional<long long> seed;
  std::vector<std::string> sets;
  bool traj = false;
  bool timing = false;
  int threads = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("scenario", scenario_path, "Scenario file")->required();
    cmd->add_option("--set", sets, "Override a scenario entry (key=value)");
  };
  auto add_batch = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--replicates", replicates, "Number of episodes")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Seed of the first episode")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--threads", threads, "Worker threads (0: all cores)")
        ->check(CLI::NonNegativeNumber);
  };

  CLI::App* run = app.add_subcommand("run", "Run a batch of episodes");
  add_common(run);
  add_batch(run);
  run->add_flag("--traj", traj, "Write one trajectory CSV per episode");
  run->add_flag("--timing", timing, "Include wall_time in the metrics");

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario file");
  add_common(validate);

  std::string param;
  std::vector<std::string> values;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Run one batch per value of a parameter");
  add_common(sweep);
  add_batch(sweep);
  sweep->add_option("--param", param, "Scenario key to vary")->required();
  sweep->add_option("--values", values, "Values, in scenario syntax")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  ScenarioEntries entries;
  ScenarioEntries overrides;
  artiprop::Scenario scenario;
  try {
    entries = artiprop::parseScenarioEntries(readFile(scenario_path));
    overrides = collectOverrides(sets, replicates, seed);
    scenario = artiprop::scenarioFromEntries(entries, overrides);
  } catch (const artiprop::ParseError& e) {
    std::cerr << scenario_path << ": " << e.what() << "\n";
    return kExitInput;
  } catch (const artiprop::ValidationError& e) {
    std::cerr << scenario_path << ": " << e.what() << "\n";
    return kExitInput;
  } catch (const artiprop::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  }

  if (*validate) {
    std::printf("%s: ok (%s, %d replicates)\n", scenario_path.c_str(),
                scenario.name.c_str(), scenario.replicates);
    return kExitOk;
  }

  const artiprop::BatchOptions options{threads, traj};
  try {
    fs::create_directories(out_dir);
    if (*run) {
      const artiprop::BatchReport report = artiprop::runBatch(scenario, options);
      const std::string metrics = artiprop::metricsJson(report, timing);
      if (const auto problems = artiprop::validateMetrics(metrics);
          !problems.empty()) {
        for (const auto& p : problems) std::cerr << "metrics: " << p << "\n";
        return kExitRuntime;
      }
      artiprop::writeFileAtomic(fs::path(out_dir) / "metrics.json", metrics);
      if (traj) {
        for (std::size_t i = 0; i < report.episodes.size(); ++i) {
          char name[48];
          std::snprintf(name, sizeof(name), "trajectory_%04zu.csv", i);
          artiprop::writeFileAtomic(
              fs::path(out_dir) / name,
              artiprop::trajectoryCsv(report.episodes[i]));
        }
      }
      printSummary(report);
    } else {
      const auto points = artiprop::runSweep(entries, param, values, overrides,
                                             options);
      artiprop::writeFileAtomic(fs::path(out_dir) / "sweep.json",
                                artiprop::sweepJson(param, points));
      for (const auto& p : points) {
        std::printf("%s = %-10s ", param.c_str(), p.value.c_str());
        printSummary(p.report);
      }
    }
  } catch (const artiprop::ParseError& e) {
    std::cerr << "--values: " << e.what() << "\n";
    return kExitInput;
  } catch (const artiprop::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
