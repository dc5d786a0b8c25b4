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

#include "artiprop/contact.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "artiprop/errors.hpp"

namespace artiprop {

World World::Grasped(const JointModel& joint, double q,
                     const Pose& handle_offset, const GraspCoupling& grasp,
                     const MechanismForces& mech, double force_limit) {
  World w;
  w.joint = joint;
  w.q = q;
  w.handle_offset = handle_offset;
  w.grasp = grasp;
  w.mech = mech;
  w.force_limit = force_limit;
  w.gripper_pose = w.graspTarget();
  return w;
}

Pose World::handlePose() const { return partPose(joint, q) * handle_offset; }

Pose World::graspTarget() const {
  return handlePose() * grasp.grasp_transform;
}

Vector6d contactWrench(const World& world) {
  const Pose target = world.graspTarget();
  const Pose& g = world.gripper_pose;
  Vector6d w;
  w << world.grasp.k_couple_rot *
           logRotation(target.rotation * g.rotation.transpose()),
      world.grasp.k_couple_trans * (target.translation - g.translation);
  return w;
}

Vector6d handleReactionWrench(const World& world,
                              const Vector6d& gripper_wrench) {
  const Pose handle = world.handlePose();
  const Vector3d force = -gripper_wrench.tail<3>();
  const Vector3d torque_at_gripper = -gripper_wrench.head<3>();
  const Vector3d lever =
      world.gripper_pose.translation - handle.translation;
  const Vector3d torque_at_handle = torque_at_gripper + lever.cross(force);
  const Matrix3d rt = handle.rotation.transpose();
  Vector6d out;
  out << rt * torque_at_handle, rt * force;
  return out;
}

Vector6d handleWrenchAtGripper(const World& world,
                               const Vector6d& handle_wrench) {
  const Pose handle = world.handlePose();
  const Vector3d force = handle.rotation * handle_wrench.tail<3>();
  const Vector3d torque_at_handle = handle.rotation * handle_wrench.head<3>();
  const Vector3d lever =
      handle.translation - world.gripper_pose.translation;
  Vector6d out;
  out << torque_at_handle + lever.cross(force), force;
  return out;
}

World applySlip(World world, const Vector6d& gripper_wrench, double dt) {
  GraspCoupling& grasp = world.grasp;
  const Pose handle = world.handlePose();

  // Rotational slip about the closing axis. A positive torque on the
  // gripper means the target sits rotated positively about the axis, so the
  // target is turned back toward the gripper.
  const Vector3d closing_world =
      (world.gripper_pose.rotation * grasp.closing_axis).normalized();
  const double torque = closing_world.dot(gripper_wrench.head<3>());
  const double torque_excess = std::abs(torque) - grasp.slip_torque_limit;
  if (torque_excess > 0.0) {
    const double angle =
        std::min(torque_excess / grasp.slip_rot_viscosity * dt,
                 torque_excess / grasp.k_couple_rot);
    const double sign = torque > 0.0 ? 1.0 : -1.0;
    const Matrix3d turn = expRotation(-sign * angle * closing_world);
    const Matrix3d target_rot =
        turn * handle.rotation * grasp.grasp_transform.rotation;
    grasp.grasp_transform.rotation = handle.rotation.transpose() * target_rot;
    grasp.grasp_transform = grasp.grasp_transform.orthonormalized();
    grasp.accumulated_slip_angle += angle;
  }

  // Translational slip along the handle.
  const Vector3d axis_handle = grasp.handle_axis.normalized();
  const Vector3d axis_world = handle.rotation * axis_handle;
  const double force = axis_world.dot(gripper_wrench.tail<3>());
  const double force_excess = std::abs(force) - grasp.slip_force_limit;
  if (force_excess > 0.0) {
    const double dist =
        std::min(force_excess / grasp.slip_trans_viscosity * dt,
                 force_excess / grasp.k_couple_trans);
    const double sign = force > 0.0 ? 1.0 : -1.0;
    grasp.grasp_transform.translation -= sign * dist * axis_handle;
    grasp.accumulated_slip_dist += dist;
    if (grasp.accumulated_slip_dist > grasp.handle_half_length) {
      std::ostringstream msg;
      msg << "gripper slid " << grasp.accumulated_slip_dist
          << " m along the handle (half-length " << grasp.handle_half_length
          << " m)";
      throw GraspLost(msg.str());
    }
  }
  return world;
}

double generalizedForce(const World& world, const Vector6d& handle_wrench) {
  const Twist local =
      adjointMap(world.handlePose().inverse(), world.joint.twist);
  return local.vector().dot(handle_wrench);
}

World stepJoint(World world, const Vector6d& handle_wrench, double dt) {
  const double force = handle_wrench.tail<3>().norm();
  if (force > world.force_limit) {
    std::ostringstream msg;
    msg << "handle force " << force << " N exceeds limit "
        << world.force_limit << " N";
    throw ForceLimitExceeded(msg.str(), force);
  }

  const MechanismForces& mech = world.mech;
  const double tau = generalizedForce(world, handle_wrench);
  if (world.q < mech.latch_disengage_q &&
      std::abs(tau) <= mech.latch_breakaway) {
    return world;
  }
  double tau_net = tau;
  if (world.q < mech.closing_spring_range_q) {
    tau_net -= mech.closing_spring_k * world.q;
  }
  world.q = world.joint.clamp(world.q + dt * tau_net / mech.damping);
  return world;
}

World stepWorld(World world, const Pose& commanded, double dt) {
  world.gripper_pose = commanded;
  world = applySlip(world, contactWrench(world), dt);
  const Vector6d wrench = contactWrench(world);
  world = stepJoint(world, handleReactionWrench(world, wrench), dt);
  world.last_wrench = wrench;
  return world;
}

}  // namespace artiprop
