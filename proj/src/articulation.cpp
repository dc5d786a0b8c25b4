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

#include "artiprop/articulation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

#include "artiprop/errors.hpp"

namespace artiprop {
namespace {

void checkLimits(double q_min, double q_max) {
  if (!(q_min <= q_max)) {
    throw std::invalid_argument("joint limits must satisfy min <= max");
  }
}

Vector3d unitOrThrow(const Vector3d& v, const char* what) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument(std::string(what) + " must be a nonzero vector");
  }
  return v / n;
}

}  // namespace

std::string_view toString(JointType type) {
  switch (type) {
    case JointType::kPrismatic:
      return "prismatic";
    case JointType::kRevolute:
      return "revolute";
    case JointType::kHelical:
      return "helical";
  }
  return "unknown";
}

std::optional<JointType> jointTypeFromString(std::string_view name) {
  if (name == "prismatic") return JointType::kPrismatic;
  if (name == "revolute") return JointType::kRevolute;
  if (name == "helical") return JointType::kHelical;
  return std::nullopt;
}

JointModel JointModel::Prismatic(const Vector3d& direction,
                                 const Pose& zero_pose, double q_min,
                                 double q_max) {
  checkLimits(q_min, q_max);
  JointModel j;
  j.twist = Twist(Vector3d::Zero(), unitOrThrow(direction, "direction"));
  j.zero_pose = zero_pose;
  j.q_min = q_min;
  j.q_max = q_max;
  j.type = JointType::kPrismatic;
  return j;
}

JointModel JointModel::Revolute(const Vector3d& axis,
                                const Vector3d& axis_point,
                                const Pose& zero_pose, double q_min,
                                double q_max) {
  checkLimits(q_min, q_max);
  const Vector3d w = unitOrThrow(axis, "axis");
  JointModel j;
  j.twist = Twist(w, axis_point.cross(w));
  j.zero_pose = zero_pose;
  j.q_min = q_min;
  j.q_max = q_max;
  j.type = JointType::kRevolute;
  return j;
}

JointModel JointModel::Helical(const Vector3d& axis,
                               const Vector3d& axis_point, double pitch,
                               const Pose& zero_pose, double q_min,
                               double q_max) {
  checkLimits(q_min, q_max);
  if (pitch == 0.0) {
    throw std::invalid_argument("helical joint needs a nonzero pitch");
  }
  const Vector3d w = unitOrThrow(axis, "axis");
  JointModel j;
  j.twist = Twist(w, axis_point.cross(w) + pitch * w);
  j.zero_pose = zero_pose;
  j.q_min = q_min;
  j.q_max = q_max;
  j.type = JointType::kHelical;
  j.pitch = pitch;
  return j;
}

double JointModel::clamp(double q) const {
  return std::clamp(q, q_min, q_max);
}

Vector3d JointModel::axisPoint() const {
  return twist.angular.cross(twist.linear) / twist.angular.squaredNorm();
}

Vector3d JointModel::axisDirection() const {
  return type == JointType::kPrismatic ? twist.linear.normalized()
                                       : twist.angular.normalized();
}

Pose partPose(const JointModel& joint, double q) {
  if (!joint.withinLimits(q)) {
    std::ostringstream msg;
    msg << "configuration " << q << " outside limits [" << joint.q_min << ", "
        << joint.q_max << "]";
    throw OutOfLimits(msg.str());
  }
  return expTwist(joint.twist, q) * joint.zero_pose;
}

JointModel transformJoint(const JointModel& joint, const Pose& transform) {
  JointModel out = joint;
  out.twist = adjointMap(transform, joint.twist);
  out.zero_pose = transform * joint.zero_pose;
  return out;
}

std::vector<Pose> generatePoseSequence(const JointModel& joint,
                                       std::span<const double> qs,
                                       const PoseNoise& noise,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Pose> poses;
  poses.reserve(qs.size());
  for (double q : qs) {
    poses.push_back(perturbPose(partPose(joint, q), noise, rng));
  }
  return poses;
}

}  // namespace artiprop
