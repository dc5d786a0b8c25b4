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

#include "artiprop/episode.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "artiprop/errors.hpp"

namespace artiprop {
namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kParallelSine = 1e-9;

Vector3d directionOf(const Twist& twist) {
  return twist.angular.norm() > kGaugeAngularEpsilon
             ? Vector3d(twist.angular.normalized())
             : Vector3d(twist.linear.normalized());
}

double lineDistance(const Vector3d& p1, const Vector3d& d1, const Vector3d& p2,
                    const Vector3d& d2) {
  const Vector3d n = d1.cross(d2);
  const Vector3d delta = p2 - p1;
  if (n.norm() < kParallelSine) return delta.cross(d1).norm();
  return std::abs(delta.dot(n)) / n.norm();
}

}  // namespace

std::string_view toString(FailureReason reason) {
  switch (reason) {
    case FailureReason::kGraspLost:
      return "GraspLost";
    case FailureReason::kForceLimitExceeded:
      return "ForceLimitExceeded";
    case FailureReason::kMaxSteps:
      return "MaxSteps";
    case FailureReason::kNotConverged:
      return "NotConverged";
    case FailureReason::kNonFiniteState:
      return "NonFiniteState";
  }
  return "Unknown";
}

std::optional<FailureReason> failureReasonFromString(std::string_view name) {
  for (FailureReason r :
       {FailureReason::kGraspLost, FailureReason::kForceLimitExceeded,
        FailureReason::kMaxSteps, FailureReason::kNotConverged,
        FailureReason::kNonFiniteState}) {
    if (toString(r) == name) return r;
  }
  return std::nullopt;
}

bool RunnerConfig::isValid() const {
  return step_dq > 0.0 && poses_per_estimate >= 1 && max_steps >= 0 &&
         dt > 0.0 && dt <= 0.05 && substeps_per_motion >= 1 &&
         success_threshold > 0.0 && success_threshold <= 1.0 &&
         pose_noise.sigma_translation >= 0.0 &&
         pose_noise.sigma_rotation >= 0.0;
}

AxisErrors axisErrors(const Twist& estimated, const JointModel& truth) {
  const Vector3d d_est = directionOf(estimated);
  const Vector3d d_true = truth.axisDirection();
  AxisErrors out;
  out.direction_deg =
      std::atan2(d_est.cross(d_true).norm(), std::abs(d_est.dot(d_true))) *
      kRadToDeg;
  const bool est_rotates = estimated.angular.norm() > kGaugeAngularEpsilon;
  if (est_rotates && truth.type != JointType::kPrismatic) {
    const Vector3d p_est = estimated.angular.cross(estimated.linear) /
                           estimated.angular.squaredNorm();
    out.position = lineDistance(p_est, d_est, truth.axisPoint(), d_true);
  }
  return out;
}

EpisodeResult runEpisode(World world, const AdmittanceParams& controller,
                         const RunnerConfig& cfg) {
  const auto wall_start = std::chrono::steady_clock::now();
  if (!cfg.isValid()) throw std::invalid_argument("invalid runner config");
  if (!controller.isValid()) {
    throw std::invalid_argument("admittance gains must be positive");
  }
  if (!world.joint.withinLimits(world.q)) {
    throw std::invalid_argument("initial configuration outside joint limits");
  }
  if (!world.grasp.grasp_transform.matrix().isIdentity(1e-12)) {
    throw std::invalid_argument("episode must start from an established grasp");
  }

  EpisodeResult result;
  std::mt19937_64 rng(cfg.seed);
  JointEstimator estimator(cfg.estimator);

  Twist estimate = initialEstimateFromGrasp(world.gripper_pose);
  AdmittanceState adm;
  adm.reference = world.gripper_pose;

  std::vector<Pose> history;
  history.push_back(perturbPose(world.gripper_pose, cfg.pose_noise, rng));

  auto record = [&](double t) {
    if (!cfg.record_trajectory) return;
    TrajectorySample s;
    s.t = t;
    s.gripper = world.gripper_pose;
    s.q_true = world.q;
    s.q_est = projectConfiguration(history.back(), history.front(), estimate,
                                   cfg.estimator.noise);
    s.wrench = world.last_wrench;
    s.slip_angle = world.grasp.accumulated_slip_angle;
    result.trajectory.push_back(s);
  };
  record(0.0);

  bool last_estimate_failed = false;
  bool done = world.q >= cfg.target_q;
  while (!done) {
    for (int motion = 0; motion < cfg.poses_per_estimate && !done; ++motion) {
      if (result.steps >= cfg.max_steps) {
        result.failure_reason = last_estimate_failed
                                    ? FailureReason::kNotConverged
                                    : FailureReason::kMaxSteps;
        done = true;
        break;
      }
      adm.reference =
          (expTwist(estimate, cfg.step_dq) * adm.reference).orthonormalized();
      try {
        for (int sub = 0; sub < cfg.substeps_per_motion; ++sub) {
          world = stepWorld(world, desiredPose(adm, controller.frame), cfg.dt);
          result.peak_force =
              std::max(result.peak_force, world.last_wrench.tail<3>().norm());
          adm = stepAdmittance(
              adm, controller,
              wrenchInControllerFrame(world.last_wrench, adm.reference,
                                      controller.frame),
              cfg.dt);
          result.sim_time += cfg.dt;
        }
      } catch (const GraspLost&) {
        result.failure_reason = FailureReason::kGraspLost;
      } catch (const ForceLimitExceeded& e) {
        result.failure_reason = FailureReason::kForceLimitExceeded;
        result.peak_force = std::max(result.peak_force, e.force());
      } catch (const NonFiniteState&) {
        result.failure_reason = FailureReason::kNonFiniteState;
      }
      ++result.steps;
      history.push_back(perturbPose(world.gripper_pose, cfg.pose_noise, rng));
      record(result.sim_time);
      if (result.failure_reason || world.q >= cfg.target_q) done = true;
    }
    if (done) break;

    try {
      EstimationResult est = estimator.estimate(history, estimate);
      last_estimate_failed = !est.converged;
      if (est.converged) estimate = est.twist;
      result.estimates.push_back(std::move(est));
    } catch (const InsufficientData&) {
      // Nothing moved yet; keep pushing along the current estimate.
    }
  }

  result.accumulated_slip_angle = world.grasp.accumulated_slip_angle;
  result.final_q_fraction =
      cfg.target_q > 0.0 ? world.q / cfg.target_q : 1.0;
  const AxisErrors errors = axisErrors(estimate, world.joint);
  result.axis_direction_error = errors.direction_deg;
  result.axis_position_error = errors.position;
  result.success = !result.failure_reason &&
                   result.final_q_fraction >= cfg.success_threshold;
  result.wall_time = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - wall_start)
                         .count();
  return result;
}

}  // namespace artiprop
