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

// Monte-Carlo batches over a scenario and the artifacts they produce.

#ifndef ARTIPROP_BATCH_HPP_
#define ARTIPROP_BATCH_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "artiprop/episode.hpp"
#include "artiprop/scenario.hpp"

namespace artiprop {

struct BatchAggregate {
  int episodes = 0;
  double success_rate = 0.0;
  double median_axis_direction_error = 0.0;  // deg
  // Over the episodes that report a position error; absent if none do.
  std::optional<double> median_axis_position_error;
  double median_steps = 0.0;
  double median_sim_time = 0.0;
};

struct BatchReport {
  std::string scenario;
  std::uint64_t seed_base = 0;
  std::vector<EpisodeResult> episodes;  // episode i used seed_base + i
  BatchAggregate aggregate;
};

struct BatchOptions {
  int threads = 0;  // 0: hardware concurrency
  bool record_trajectory = false;
};

BatchAggregate aggregateEpisodes(std::span<const EpisodeResult> episodes);

// Results are ordered by replicate index whatever the thread count.
BatchReport runBatch(const Scenario& scenario, const BatchOptions& options = {});

// Metrics document. wall_time is written only when `include_timing` is set,
// so that the default output is reproducible byte for byte.
std::string metricsJson(const BatchReport& report, bool include_timing = false);

// Checks a metrics document against the documented layout. Returns one
// message per problem; empty when valid.
std::vector<std::string> validateMetrics(std::string_view json_text);

inline constexpr std::string_view kTrajectoryHeader =
    "t,gx,gy,gz,gqw,gqx,gqy,gqz,q_true,q_est,fx,fy,fz,tx,ty,tz,slip_angle";

std::string trajectoryCsv(const EpisodeResult& episode);

struct SweepPoint {
  std::string value;  // as written on the command line
  BatchReport report;
};

// One batch per value of `key`; each value replaces the scenario entry.
std::vector<SweepPoint> runSweep(const ScenarioEntries& entries,
                                 const std::string& key,
                                 std::span<const std::string> values,
                                 const ScenarioEntries& overrides,
                                 const BatchOptions& options = {});

std::string sweepJson(const std::string& key,
                      std::span<const SweepPoint> points);

// Writes to a sibling temporary file and renames it into place.
void writeFileAtomic(const std::filesystem::path& path,
                     std::string_view contents);

}  // namespace artiprop

#endif  // ARTIPROP_BATCH_HPP_
