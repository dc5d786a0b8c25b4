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

#ifndef ARTIPROP_ARTICULATION_HPP_
#define ARTIPROP_ARTICULATION_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "artiprop/se3.hpp"

namespace artiprop {

enum class JointType { kPrismatic, kRevolute, kHelical };

std::string_view toString(JointType type);
std::optional<JointType> jointTypeFromString(std::string_view name);

// Single-DOF joint. The twist lives in the world frame and is kept in the
// canonical gauge, so q is in meters for prismatic joints and radians
// otherwise.
struct JointModel {
  Twist twist;
  Pose zero_pose;
  double q_min = 0.0;
  double q_max = 0.0;
  JointType type = JointType::kPrismatic;
  double pitch = 0.0;  // m/rad, helical only

  static JointModel Prismatic(const Vector3d& direction, const Pose& zero_pose,
                              double q_min, double q_max);
  static JointModel Revolute(const Vector3d& axis, const Vector3d& axis_point,
                             const Pose& zero_pose, double q_min, double q_max);
  static JointModel Helical(const Vector3d& axis, const Vector3d& axis_point,
                            double pitch, const Pose& zero_pose, double q_min,
                            double q_max);

  bool withinLimits(double q, double tolerance = 1e-9) const {
    return q >= q_min - tolerance && q <= q_max + tolerance;
  }
  double clamp(double q) const;

  // Point on the axis closest to the world origin. Meaningless for prismatic
  // joints.
  Vector3d axisPoint() const;
  // Unit direction of the axis line (angular part, or linear part for
  // prismatic joints).
  Vector3d axisDirection() const;
};

// Throws OutOfLimits when q lies outside the limits by more than 1e-9.
Pose partPose(const JointModel& joint, double q);

// Re-express a joint after moving the whole object by T.
JointModel transformJoint(const JointModel& joint, const Pose& transform);

// Measurement noise on poses: isotropic Gaussian translation (m) and a
// rotation by a Gaussian angle (rad) about a uniformly random axis.
struct PoseNoise {
  double sigma_translation = 0.0;
  double sigma_rotation = 0.0;

  bool isZero() const {
    return sigma_translation == 0.0 && sigma_rotation == 0.0;
  }
};

template <typename Rng>
Pose perturbPose(const Pose& pose, const PoseNoise& noise, Rng& rng);

std::vector<Pose> generatePoseSequence(const JointModel& joint,
                                       std::span<const double> qs,
                                       const PoseNoise& noise,
                                       std::uint64_t seed);

}  // namespace artiprop

#include "artiprop/articulation_inl.hpp"

#endif  // ARTIPROP_ARTICULATION_HPP_
