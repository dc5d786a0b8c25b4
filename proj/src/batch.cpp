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
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "artiprop/errors.hpp"

namespace artiprop {
namespace {

using nlohmann::ordered_json;

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// JSON has no infinities; large finite stand-ins would be misleading.
ordered_json number(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

ordered_json estimateJson(const EstimationResult& e) {
  ordered_json twist = ordered_json::array();
  for (int i = 0; i < 6; ++i) twist.push_back(number(e.twist.vector()(i)));
  ordered_json qs = ordered_json::array();
  for (double q : e.configurations) qs.push_back(number(q));
  ordered_json out;
  out["twist"] = std::move(twist);
  out["configurations"] = std::move(qs);
  out["residual_rms"] = number(e.residual_rms);
  out["joint_type"] = std::string(toString(e.joint_type));
  out["converged"] = e.converged;
  out["iterations"] = e.iterations;
  return out;
}

ordered_json episodeJson(const EpisodeResult& r, bool include_timing) {
  ordered_json out;
  out["success"] = r.success;
  out["final_q_fraction"] = number(r.final_q_fraction);
  out["steps"] = r.steps;
  out["sim_time"] = number(r.sim_time);
  if (include_timing) out["wall_time"] = number(r.wall_time);
  ordered_json estimates = ordered_json::array();
  for (const auto& e : r.estimates) estimates.push_back(estimateJson(e));
  out["estimates"] = std::move(estimates);
  out["axis_direction_error"] = number(r.axis_direction_error);
  out["axis_position_error"] = r.axis_position_error
                                   ? number(*r.axis_position_error)
                                   : ordered_json(nullptr);
  out["peak_force"] = number(r.peak_force);
  out["accumulated_slip_angle"] = number(r.accumulated_slip_angle);
  out["failure_reason"] = r.failure_reason
                              ? ordered_json(std::string(toString(*r.failure_reason)))
                              : ordered_json(nullptr);
  return out;
}

ordered_json aggregateJson(const BatchAggregate& a) {
  ordered_json out;
  out["episodes"] = a.episodes;
  out["success_rate"] = number(a.success_rate);
  out["median_axis_direction_error"] = number(a.median_axis_direction_error);
  out["median_axis_position_error"] =
      a.median_axis_position_error ? number(*a.median_axis_position_error)
                                   : ordered_json(nullptr);
  out["median_steps"] = number(a.median_steps);
  out["median_sim_time"] = number(a.median_sim_time);
  return out;
}

ordered_json reportJson(const BatchReport& report, bool include_timing) {
  ordered_json out;
  out["scenario"] = report.scenario;
  out["seed_base"] = report.seed_base;
  out["aggregate"] = aggregateJson(report.aggregate);
  ordered_json episodes = ordered_json::array();
  for (const auto& e : report.episodes) {
    episodes.push_back(episodeJson(e, include_timing));
  }
  out["episodes"] = std::move(episodes);
  return out;
}

// Minimal structural checks mirroring docs/metrics.schema.json.
class MetricsChecker {
 public:
  std::vector<std::string> errors;

  void require(const nlohmann::json& obj, const std::string& path,
               const std::string& key, bool (*pred)(const nlohmann::json&),
               const char* expected) {
    if (!obj.contains(key)) {
      errors.push_back(path + "." + key + ": missing");
    } else if (!pred(obj.at(key))) {
      errors.push_back(path + "." + key + ": expected " + expected);
    }
  }

  static bool isNumber(const nlohmann::json& j) { return j.is_number(); }
  static bool isNumberOrNull(const nlohmann::json& j) {
    return j.is_number() || j.is_null();
  }
  static bool isInteger(const nlohmann::json& j) {
    return j.is_number_integer() || j.is_number_unsigned();
  }
  static bool isBool(const nlohmann::json& j) { return j.is_boolean(); }
  static bool isString(const nlohmann::json& j) { return j.is_string(); }
  static bool isArray(const nlohmann::json& j) { return j.is_array(); }
  static bool isObject(const nlohmann::json& j) { return j.is_object(); }
  static bool isReason(const nlohmann::json& j) {
    return j.is_null() ||
           (j.is_string() && failureReasonFromString(j.get<std::string>()));
  }
  static bool isJointType(const nlohmann::json& j) {
    return j.is_string() && jointTypeFromString(j.get<std::string>());
  }
  static bool isTwist(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 6) return false;
    return std::all_of(j.begin(), j.end(),
                       [](const nlohmann::json& x) { return x.is_number(); });
  }
  static bool isFraction(const nlohmann::json& j) {
    return j.is_number() && j.get<double>() >= 0.0 && j.get<double>() <= 1.0;
  }

  void estimate(const nlohmann::json& e, const std::string& path) {
    if (!e.is_object()) {
      errors.push_back(path + ": expected object");
      return;
    }
    require(e, path, "twist", isTwist, "array of 6 numbers");
    require(e, path, "configurations", isArray, "array");
    require(e, path, "residual_rms", isNumberOrNull, "number");
    require(e, path, "joint_type", isJointType, "joint type name");
    require(e, path, "converged", isBool, "boolean");
    require(e, path, "iterations", isInteger, "integer");
  }

  void episode(const nlohmann::json& e, const std::string& path) {
    if (!e.is_object()) {
      errors.push_back(path + ": expected object");
      return;
    }
    require(e, path, "success", isBool, "boolean");
    require(e, path, "final_q_fraction", isNumber, "number");
    require(e, path, "steps", isInteger, "integer");
    require(e, path, "sim_time", isNumber, "number");
    if (e.contains("wall_time")) {
      require(e, path, "wall_time", isNumber, "number");
    }
    require(e, path, "estimates", isArray, "array");
    require(e, path, "axis_direction_error", isNumber, "number");
    require(e, path, "axis_position_error", isNumberOrNull, "number or null");
    require(e, path, "peak_force", isNumber, "number");
    require(e, path, "accumulated_slip_angle", isNumber, "number");
    require(e, path, "failure_reason", isReason, "failure reason or null");
    if (e.contains("estimates") && e.at("estimates").is_array()) {
      const auto& list = e.at("estimates");
      for (std::size_t i = 0; i < list.size(); ++i) {
        estimate(list[i], path + ".estimates[" + std::to_string(i) + "]");
      }
    }
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

BatchAggregate aggregateEpisodes(std::span<const EpisodeResult> episodes) {
  BatchAggregate a;
  a.episodes = static_cast<int>(episodes.size());
  if (episodes.empty()) return a;
  std::vector<double> dir, pos, steps, time;
  int successes = 0;
  for (const EpisodeResult& e : episodes) {
    successes += e.success ? 1 : 0;
    dir.push_back(e.axis_direction_error);
    if (e.axis_position_error) pos.push_back(*e.axis_position_error);
    steps.push_back(e.steps);
    time.push_back(e.sim_time);
  }
  a.success_rate = static_cast<double>(successes) / episodes.size();
  a.median_axis_direction_error = median(dir);
  if (!pos.empty()) a.median_axis_position_error = median(pos);
  a.median_steps = median(steps);
  a.median_sim_time = median(time);
  return a;
}

BatchReport runBatch(const Scenario& scenario, const BatchOptions& options) {
  BatchReport report;
  report.scenario = scenario.name;
  report.seed_base = scenario.seed_base;
  const int n = scenario.replicates;
  report.episodes.resize(n);

  const World world = scenario.makeWorld();
  int threads = options.threads > 0
                    ? options.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, std::max(n, 1));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        RunnerConfig cfg = scenario.runnerFor(i);
        cfg.record_trajectory = options.record_trajectory;
        report.episodes[i] = runEpisode(world, scenario.controller, cfg);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  report.aggregate = aggregateEpisodes(report.episodes);
  return report;
}

std::string metricsJson(const BatchReport& report, bool include_timing) {
  return reportJson(report, include_timing).dump(2) + "\n";
}

std::vector<std::string> validateMetrics(std::string_view json_text) {
  MetricsChecker c;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    return {std::string("not valid JSON: ") + e.what()};
  }
  if (!doc.is_object()) return {"document: expected object"};
  c.require(doc, "$", "scenario", MetricsChecker::isString, "string");
  c.require(doc, "$", "seed_base", MetricsChecker::isInteger, "integer");
  c.require(doc, "$", "aggregate", MetricsChecker::isObject, "object");
  c.require(doc, "$", "episodes", MetricsChecker::isArray, "array");
  if (doc.contains("aggregate") && doc.at("aggregate").is_object()) {
    const auto& a = doc.at("aggregate");
    c.require(a, "$.aggregate", "episodes", MetricsChecker::isInteger,
              "integer");
    c.require(a, "$.aggregate", "success_rate", MetricsChecker::isFraction,
              "number in [0, 1]");
    c.require(a, "$.aggregate", "median_axis_direction_error",
              MetricsChecker::isNumber, "number");
    c.require(a, "$.aggregate", "median_axis_position_error",
              MetricsChecker::isNumberOrNull, "number or null");
    c.require(a, "$.aggregate", "median_steps", MetricsChecker::isNumber,
              "number");
    c.require(a, "$.aggregate", "median_sim_time", MetricsChecker::isNumber,
              "number");
  }
  if (doc.contains("episodes") && doc.at("episodes").is_array()) {
    const auto& list = doc.at("episodes");
    for (std::size_t i = 0; i < list.size(); ++i) {
      c.episode(list[i], "$.episodes[" + std::to_string(i) + "]");
    }
    if (doc.contains("aggregate") && doc.at("aggregate").is_object() &&
        doc.at("aggregate").contains("episodes") &&
        doc.at("aggregate").at("episodes") != list.size()) {
      c.errors.push_back("$.aggregate.episodes: does not match episode count");
    }
  }
  return c.errors;
}

std::string trajectoryCsv(const EpisodeResult& episode) {
  std::string out(kTrajectoryHeader);
  out += "\n";
  for (const TrajectorySample& s : episode.trajectory) {
    const Eigen::Vector4d quat = toQuaternionWxyz(s.gripper.rotation);
    const double fields[] = {s.t,
                             s.gripper.translation.x(),
                             s.gripper.translation.y(),
                             s.gripper.translation.z(),
                             quat(0),
                             quat(1),
                             quat(2),
                             quat(3),
                             s.q_true,
                             s.q_est,
                             s.wrench(3),
                             s.wrench(4),
                             s.wrench(5),
                             s.wrench(0),
                             s.wrench(1),
                             s.wrench(2),
                             s.slip_angle};
    bool first = true;
    for (double f : fields) {
      if (!first) out += ",";
      out += fmt(f);
      first = false;
    }
    out += "\n";
  }
  return out;
}

std::vector<SweepPoint> runSweep(const ScenarioEntries& entries,
                                 const std::string& key,
                                 std::span<const std::string> values,
                                 const ScenarioEntries& overrides,
                                 const BatchOptions& options) {
  std::vector<SweepPoint> points;
  for (const std::string& text : values) {
    ScenarioEntries merged = overrides;
    ScenarioValue value = parseScenarioValue(text);
    merged[key] = std::move(value);
    const Scenario scenario = scenarioFromEntries(entries, merged);
    points.push_back({text, runBatch(scenario, options)});
  }
  return points;
}

std::string sweepJson(const std::string& key,
                      std::span<const SweepPoint> points) {
  ordered_json out;
  out["param"] = key;
  ordered_json list = ordered_json::array();
  for (const SweepPoint& p : points) {
    ordered_json item;
    item["value"] = p.value;
    item["aggregate"] = aggregateJson(p.report.aggregate);
    ordered_json reasons = ordered_json::object();
    for (const auto& e : p.report.episodes) {
      const std::string name =
          e.failure_reason ? std::string(toString(*e.failure_reason))
                           : (e.success ? "success" : "incomplete");
      reasons[name] = reasons.value(name, 0) + 1;
    }
    item["outcomes"] = std::move(reasons);
    ordered_json slip = ordered_json::array();
    for (const auto& e : p.report.episodes) {
      slip.push_back(number(e.accumulated_slip_angle));
    }
    item["accumulated_slip_angle"] = std::move(slip);
    list.push_back(std::move(item));
  }
  out["points"] = std::move(list);
  return out.dump(2) + "\n";
}

void writeFileAtomic(const std::filesystem::path& path,
                     std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move " + tmp.string() + " into place");
  }
}

}  // namespace artiprop
