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

// Scenario files: flat `dotted.key = value` text. See docs/scenario-format.md
// for the key reference. Angles are written in degrees and converted to
// radians on load.

#ifndef ARTIPROP_SCENARIO_HPP_
#define ARTIPROP_SCENARIO_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "artiprop/admittance.hpp"
#include "artiprop/articulation.hpp"
#include "artiprop/contact.hpp"
#include "artiprop/episode.hpp"

namespace artiprop {

// A parsed right-hand side: number, list of numbers, or bare word.
struct ScenarioValue {
  std::variant<double, std::vector<double>, std::string> data;
  int line = 0;
  int column = 0;
};

using ScenarioEntries = std::map<std::string, ScenarioValue>;

// Syntax only; throws ParseError with the 1-based line and column.
ScenarioEntries parseScenarioEntries(std::string_view text);
// A single right-hand side, as given on the command line for sweeps.
ScenarioValue parseScenarioValue(std::string_view text);

struct ObjectSpec {
  JointType type = JointType::kPrismatic;
  Vector3d axis_direction = -Vector3d::UnitZ();
  Vector3d axis_origin = Vector3d::Zero();
  double pitch = 0.0;  // m/rad
  double q_min = 0.0;  // m or rad
  double q_max = 0.3;
  double initial_q = 0.0;
  Vector3d zero_position = Vector3d::Zero();
  Vector3d zero_rpy = Vector3d::Zero();  // rad
  Vector3d handle_position = Vector3d::Zero();
  Vector3d handle_rpy = Vector3d::Zero();  // rad
  MechanismForces mech;
};

struct Scenario {
  std::string name = "unnamed";
  ObjectSpec object;
  GraspCoupling grasp;
  double force_limit = 60.0;  // N
  AdmittanceParams controller = AdmittanceParams::Defaults();
  RunnerConfig runner;
  int replicates = 1;
  std::uint64_t seed_base = 0;

  JointModel joint() const;
  // Fresh world with the gripper on the handle.
  World makeWorld() const;
  // Runner config for replicate `index` (seed = seed_base + index).
  RunnerConfig runnerFor(int index) const;
};

// Builds and validates a scenario from entries; `overrides` replace entries
// of the same key. Throws ValidationError naming the key.
Scenario scenarioFromEntries(const ScenarioEntries& entries,
                             const ScenarioEntries& overrides = {});

Scenario parseScenario(std::string_view text,
                       const ScenarioEntries& overrides = {});
Scenario loadScenario(const std::filesystem::path& path,
                      const ScenarioEntries& overrides = {});

// Full text form with every key written out; parses back to an equivalent
// scenario.
std::string serializeScenario(const Scenario& scenario);

// Field-wise comparison with a relative tolerance for the unit conversions.
bool equivalent(const Scenario& a, const Scenario& b, double tolerance = 1e-12);

}  // namespace artiprop

#endif  // ARTIPROP_SCENARIO_HPP_
