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

#include "artiprop/admittance.hpp"

#include <cmath>
#include <stdexcept>

#include "artiprop/errors.hpp"

namespace artiprop {

constexpr double kMaxAdmittanceStep = 0.05;

std::string_view toString(AdmittanceFrame frame) {
  return frame == AdmittanceFrame::kGripper ? "gripper" : "world";
}

std::optional<AdmittanceFrame> admittanceFrameFromString(
    std::string_view name) {
  if (name == "gripper") return AdmittanceFrame::kGripper;
  if (name == "world") return AdmittanceFrame::kWorld;
  return std::nullopt;
}

AdmittanceParams AdmittanceParams::Defaults() {
  AdmittanceParams p;
  p.stiffness << 50.0, 50.0, 200.0, 2.0, 2.0, 2.0;
  p.mass << 2.0, 2.0, 2.0, 0.05, 0.05, 0.05;
  p.damping = criticalDamping(p.stiffness, p.mass);
  p.frame = AdmittanceFrame::kGripper;
  return p;
}

Vector6d AdmittanceParams::criticalDamping(const Vector6d& stiffness,
                                           const Vector6d& mass) {
  return 2.0 * stiffness.cwiseProduct(mass).cwiseSqrt();
}

bool AdmittanceParams::isValid() const {
  return stiffness.allFinite() && damping.allFinite() && mass.allFinite() &&
         (stiffness.array() > 0.0).all() && (damping.array() > 0.0).all() &&
         (mass.array() > 0.0).all();
}

Vector6d gainToMotionOrder(const Vector6d& gains) {
  Vector6d out;
  out << gains.tail<3>(), gains.head<3>();
  return out;
}

Vector6d motionToGainOrder(const Vector6d& motion) {
  Vector6d out;
  out << motion.tail<3>(), motion.head<3>();
  return out;
}

AdmittanceState stepAdmittance(const AdmittanceState& state,
                               const AdmittanceParams& params,
                               const Vector6d& wrench, double dt) {
  if (!(dt > 0.0 && dt <= kMaxAdmittanceStep)) {
    throw std::invalid_argument("admittance step dt must lie in (0, 0.05]");
  }
  const Vector6d k = gainToMotionOrder(params.stiffness);
  const Vector6d b = gainToMotionOrder(params.damping);
  const Vector6d m = gainToMotionOrder(params.mass);

  const Vector6d accel =
      (wrench - k.cwiseProduct(state.deviation) -
       b.cwiseProduct(state.deviation_rate))
          .cwiseQuotient(m);

  AdmittanceState next = state;
  next.deviation_rate = state.deviation_rate + dt * accel;
  next.deviation = state.deviation + dt * next.deviation_rate;
  if (!next.deviation.allFinite() || !next.deviation_rate.allFinite()) {
    throw NonFiniteState("admittance integration diverged");
  }
  return next;
}

Pose desiredPose(const AdmittanceState& state, AdmittanceFrame frame) {
  const Matrix3d rot = expRotation(state.deviation.head<3>());
  const Vector3d trans = state.deviation.tail<3>();
  const Pose& ref = state.reference;
  if (frame == AdmittanceFrame::kGripper) {
    return ref * Pose(rot, trans);
  }
  return Pose(rot * ref.rotation, ref.translation + trans);
}

Vector6d wrenchInControllerFrame(const Vector6d& world_wrench,
                                 const Pose& reference,
                                 AdmittanceFrame frame) {
  if (frame == AdmittanceFrame::kWorld) return world_wrench;
  const Matrix3d rt = reference.rotation.transpose();
  Vector6d out;
  out << rt * world_wrench.head<3>(), rt * world_wrench.tail<3>();
  return out;
}

double admittanceEnergy(const AdmittanceState& state,
                        const AdmittanceParams& params) {
  const Vector6d k = gainToMotionOrder(params.stiffness);
  const Vector6d m = gainToMotionOrder(params.mass);
  return 0.5 * (state.deviation_rate.cwiseAbs2().dot(m) +
                state.deviation.cwiseAbs2().dot(k));
}

}  // namespace artiprop
