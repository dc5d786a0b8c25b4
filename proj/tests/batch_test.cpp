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

#include "artiprop/batch.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "artiprop/errors.hpp"

namespace artiprop {
namespace {

namespace fs = std::filesystem;

const std::string kScenarioDir = ARTIPROP_SCENARIO_DIR;

Scenario drawer(int replicates) {
  ScenarioEntries overrides;
  overrides["replicates"] = parseScenarioValue(std::to_string(replicates));
  return loadScenario(kScenarioDir + "/drawer.scenario", overrides);
}

std::size_t countLines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

TEST(BatchTest, MedianOfEvenAndOddCounts) {
  std::vector<EpisodeResult> e(4);
  e[0].steps = 10;
  e[1].steps = 40;
  e[2].steps = 20;
  e[3].steps = 30;
  e[0].success = e[1].success = e[2].success = true;
  e[1].axis_position_error = 0.2;
  const BatchAggregate a = aggregateEpisodes(e);
  EXPECT_EQ(a.episodes, 4);
  EXPECT_DOUBLE_EQ(a.success_rate, 0.75);
  EXPECT_DOUBLE_EQ(a.median_steps, 25.0);
  EXPECT_EQ(a.median_axis_position_error, 0.2);
  EXPECT_DOUBLE_EQ(aggregateEpisodes(std::span(e).first(3)).median_steps, 20.0);
}

TEST(BatchTest, SingleReplicateAggregateEqualsTheEpisode) {
  const BatchReport r = runBatch(drawer(1));
  ASSERT_EQ(r.episodes.size(), 1u);
  const EpisodeResult& e = r.episodes[0];
  EXPECT_EQ(r.aggregate.success_rate, e.success ? 1.0 : 0.0);
  EXPECT_EQ(r.aggregate.median_steps, e.steps);
  EXPECT_EQ(r.aggregate.median_sim_time, e.sim_time);
  EXPECT_EQ(r.aggregate.median_axis_direction_error, e.axis_direction_error);
  EXPECT_EQ(r.aggregate.median_axis_position_error, e.axis_position_error);
}

TEST(BatchTest, ThreadCountDoesNotChangeResults) {
  const Scenario s = drawer(8);
  const std::string one = metricsJson(runBatch(s, {1, false}));
  const std::string many = metricsJson(runBatch(s, {4, false}));
  EXPECT_EQ(one, many);
}

TEST(BatchTest, MetricsValidate) {
  const BatchReport r = runBatch(drawer(3));
  const std::string json = metricsJson(r);
  EXPECT_TRUE(validateMetrics(json).empty());
  EXPECT_EQ(json.find("wall_time"), std::string::npos);
  const std::string timed = metricsJson(r, true);
  EXPECT_NE(timed.find("wall_time"), std::string::npos);
  EXPECT_TRUE(validateMetrics(timed).empty());

  auto doc = nlohmann::json::parse(json);
  EXPECT_EQ(doc["episodes"].size(), 3u);
  for (const char* key :
       {"success", "final_q_fraction", "steps", "sim_time", "estimates",
        "axis_direction_error", "axis_position_error", "peak_force",
        "accumulated_slip_angle", "failure_reason"}) {
    EXPECT_TRUE(doc["episodes"][0].contains(key)) << key;
  }
}

TEST(BatchTest, ValidatorCatchesProblems) {
  auto doc = nlohmann::json::parse(metricsJson(runBatch(drawer(1))));
  doc["episodes"][0].erase("steps");
  doc["episodes"][0]["failure_reason"] = "Tired";
  doc["aggregate"]["success_rate"] = 2.0;
  const auto problems = validateMetrics(doc.dump());
  EXPECT_EQ(problems.size(), 3u);
  EXPECT_FALSE(validateMetrics("{not json").empty());
  EXPECT_FALSE(validateMetrics("[]").empty());
}

TEST(BatchTest, TrajectoryHasOneRowPerStepPlusInitial) {
  const BatchReport r = runBatch(drawer(1), {1, true});
  const std::string csv = trajectoryCsv(r.episodes[0]);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kTrajectoryHeader);
  EXPECT_EQ(countLines(csv), static_cast<std::size_t>(r.episodes[0].steps) + 2);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 16);
  EXPECT_EQ(line.substr(0, 2), "0,");
}

TEST(BatchTest, AtomicWriteLeavesNoTemporary) {
  const fs::path dir = fs::temp_directory_path() / "artiprop_batch_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path file = dir / "metrics.json";
  writeFileAtomic(file, "first");
  writeFileAtomic(file, "second");
  std::ifstream in(file);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  EXPECT_EQ(content, "second");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator()),
            1);
  EXPECT_THROW(writeFileAtomic(dir / "no" / "such" / "dir.json", "x"), Error);
  fs::remove_all(dir);
}

TEST(BatchTest, SweepRunsOneBatchPerValue) {
  std::ifstream in(kScenarioDir + "/drawer.scenario");
  std::stringstream buf;
  buf << in.rdbuf();
  const ScenarioEntries entries = parseScenarioEntries(buf.str());
  ScenarioEntries overrides;
  overrides["replicates"] = parseScenarioValue("2");
  const std::vector<std::string> values = {"20", "60"};
  const auto points =
      runSweep(entries, "world.force_limit", values, overrides, {1, false});
  ASSERT_EQ(points.size(), 2u);
  EXPECT_EQ(points[0].report.episodes.size(), 2u);
  const auto doc = nlohmann::json::parse(sweepJson("world.force_limit", points));
  EXPECT_EQ(doc["param"], "world.force_limit");
  EXPECT_EQ(doc["points"][1]["value"], "60");
}

}  // namespace
}  // namespace artiprop
