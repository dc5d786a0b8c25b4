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

// Quasi-static world: a 1-DOF articulated part, a spring-coupled grasp with
// Coulomb-style slip, and optional latch / closing-spring mechanisms.
//
// Wrench conventions:
//  - the gripper wrench is (torque, force) in world axes, torque about the
//    gripper origin;
//  - the handle wrench is (torque, force) in handle axes, torque about the
//    handle origin.

#ifndef ARTIPROP_CONTACT_HPP_
#define ARTIPROP_CONTACT_HPP_

#include <limits>

#include "artiprop/articulation.hpp"
#include "artiprop/se3.hpp"

namespace artiprop {

inline constexpr double kUnlimited = std::numeric_limits<double>::infinity();

struct GraspCoupling {
  Pose grasp_transform;  // handle frame -> grasped gripper frame
  double k_couple_trans = 1000.0;  // N/m
  double k_couple_rot = 20.0;      // N*m/rad
  double slip_torque_limit = kUnlimited;  // N*m about the closing axis
  double slip_force_limit = kUnlimited;   // N along the handle axis
  // Slip rate per unit of excess torque / force.
  double slip_rot_viscosity = 0.05;    // N*m*s/rad
  double slip_trans_viscosity = 20.0;  // N*s/m
  Vector3d closing_axis = Vector3d::UnitY();  // gripper frame
  Vector3d handle_axis = Vector3d::UnitX();   // handle frame
  double handle_half_length = 0.06;           // m
  double accumulated_slip_angle = 0.0;        // rad
  double accumulated_slip_dist = 0.0;         // m
};

// Generalized forces act per unit of joint configuration (N for prismatic
// joints, N*m for rotating ones).
struct MechanismForces {
  double damping = 50.0;
  double latch_breakaway = 0.0;
  double latch_disengage_q = 0.0;
  double closing_spring_k = 0.0;
  double closing_spring_range_q = 0.0;
};

struct World {
  JointModel joint;
  double q = 0.0;
  Pose handle_offset;  // handle frame on the moving part
  GraspCoupling grasp;
  MechanismForces mech;
  Pose gripper_pose;
  Vector6d last_wrench = Vector6d::Zero();  // on the gripper
  double force_limit = kUnlimited;          // N

  // World with the gripper holding the handle at the grasped pose.
  static World Grasped(const JointModel& joint, double q,
                       const Pose& handle_offset, const GraspCoupling& grasp,
                       const MechanismForces& mech, double force_limit);

  Pose handlePose() const;
  // Where the grasp wants the gripper to be.
  Pose graspTarget() const;
};

// Spring wrench pulling the gripper toward the grasp target.
Vector6d contactWrench(const World& world);

// Equal and opposite wrench acting on the handle, in handle conventions.
Vector6d handleReactionWrench(const World& world,
                              const Vector6d& gripper_wrench);

// A handle wrench moved back to gripper conventions.
Vector6d handleWrenchAtGripper(const World& world,
                               const Vector6d& handle_wrench);

// Slides the grasp where the coupling exceeds its friction limits. Throws
// GraspLost once the accumulated slide passes the handle half-length.
World applySlip(World world, const Vector6d& gripper_wrench, double dt);

// Reciprocal product of the true joint twist with a handle wrench.
double generalizedForce(const World& world, const Vector6d& handle_wrench);

// First-order joint update q' = tau_net / b. Throws ForceLimitExceeded when
// the handle force exceeds the world's force limit.
World stepJoint(World world, const Vector6d& handle_wrench, double dt);

// Moves the gripper to `commanded`, resolves slip, drives the joint with the
// reaction and records the transmitted wrench in last_wrench.
World stepWorld(World world, const Pose& commanded, double dt);

}  // namespace artiprop

#endif  // ARTIPROP_CONTACT_HPP_
