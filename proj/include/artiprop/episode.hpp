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

// Closed-loop opening: compliant motion along the current joint estimate,
// re-estimation from the gripper pose history every N motions.

#ifndef ARTIPROP_EPISODE_HPP_
#define ARTIPROP_EPISODE_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "artiprop/admittance.hpp"
#include "artiprop/articulation.hpp"
#include "artiprop/contact.hpp"
#include "artiprop/estimation.hpp"

namespace artiprop {

enum class FailureReason {
  kGraspLost,
  kForceLimitExceeded,
  kMaxSteps,
  kNotConverged,
  kNonFiniteState,
};

std::string_view toString(FailureReason reason);
std::optional<FailureReason> failureReasonFromString(std::string_view name);

struct RunnerConfig {
  double step_dq = 0.01;         // per motion, in the estimate's units
  int poses_per_estimate = 5;    // N
  double target_q = 0.0;         // joint units of the ground truth
  int max_steps = 400;           // motions
  double dt = 0.002;             // s, simulation and control period
  int substeps_per_motion = 50;  // control periods per motion
  double success_threshold = 0.9;
  PoseNoise pose_noise;
  std::uint64_t seed = 0;
  EstimatorConfig estimator;
  bool record_trajectory = false;

  bool isValid() const;
};

// One row per motion plus the initial state.
struct TrajectorySample {
  double t = 0.0;
  Pose gripper;
  double q_true = 0.0;
  double q_est = 0.0;
  Vector6d wrench = Vector6d::Zero();  // on the gripper, world axes
  double slip_angle = 0.0;
};

struct EpisodeResult {
  bool success = false;
  double final_q_fraction = 0.0;
  int steps = 0;
  double sim_time = 0.0;   // s
  double wall_time = 0.0;  // s; the only non-deterministic field
  std::vector<EstimationResult> estimates;
  double axis_direction_error = 0.0;         // deg
  std::optional<double> axis_position_error;  // m
  double peak_force = 0.0;                    // N
  double accumulated_slip_angle = 0.0;        // rad
  std::optional<FailureReason> failure_reason;
  std::vector<TrajectorySample> trajectory;
};

struct AxisErrors {
  double direction_deg = 0.0;
  std::optional<double> position;  // absent unless both axes rotate
};

// Angle between the axis lines (folded to [0, 90] deg) and the distance
// between them.
AxisErrors axisErrors(const Twist& estimated, const JointModel& truth);

// Throws std::invalid_argument when the world or configuration violate the
// preconditions (q outside limits, grasp not at identity, invalid gains).
// Simulation failures are reported through EpisodeResult::failure_reason.
EpisodeResult runEpisode(World world, const AdmittanceParams& controller,
                         const RunnerConfig& cfg);

}  // namespace artiprop

#endif  // ARTIPROP_EPISODE_HPP_
