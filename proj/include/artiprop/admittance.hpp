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

// Outer-loop admittance control: W_ext = K x_e + B x_e' + M x_e''.
//
// Gains are given as diagonal 6-vectors ordered translation (x, y, z) then
// rotation (x, y, z). The deviation state and wrenches follow the library
// convention of angular part first.

#ifndef ARTIPROP_ADMITTANCE_HPP_
#define ARTIPROP_ADMITTANCE_HPP_

#include <optional>
#include <string_view>

#include "artiprop/se3.hpp"

namespace artiprop {

enum class AdmittanceFrame { kGripper, kWorld };

std::string_view toString(AdmittanceFrame frame);
std::optional<AdmittanceFrame> admittanceFrameFromString(std::string_view name);

struct AdmittanceParams {
  Vector6d stiffness;  // N/m x3, N*m/rad x3
  Vector6d damping;    // N*s/m x3, N*m*s/rad x3
  Vector6d mass;       // kg x3, kg*m^2 x3
  AdmittanceFrame frame = AdmittanceFrame::kGripper;

  // Gripper-frame stiffness 50/50/200 N/m and 2 N*m/rad, masses 2 kg and
  // 0.05 kg*m^2, critically damped.
  static AdmittanceParams Defaults();

  // B = 2 sqrt(K M) on every axis.
  static Vector6d criticalDamping(const Vector6d& stiffness,
                                  const Vector6d& mass);

  bool isValid() const;
};

// Swap between the translation-first gain layout and the angular-first
// motion layout.
Vector6d gainToMotionOrder(const Vector6d& gains);
Vector6d motionToGainOrder(const Vector6d& motion);

struct AdmittanceState {
  Pose reference;                              // X_r
  Vector6d deviation = Vector6d::Zero();       // X_e (rad, m)
  Vector6d deviation_rate = Vector6d::Zero();  // X_e' (rad/s, m/s)
};

// One semi-implicit Euler step. `wrench` is the external (torque, force) on
// the end effector, expressed in the axes named by params.frame.
//
// Throws std::invalid_argument for dt outside (0, 0.05] and NonFiniteState
// if the update is not finite.
AdmittanceState stepAdmittance(const AdmittanceState& state,
                               const AdmittanceParams& params,
                               const Vector6d& wrench, double dt);

// X_d: the reference pose displaced by the deviation. In the gripper frame
// the displacement is applied on the right; in the world frame the
// translation is added in world axes and the rotation is applied about the
// reference origin.
Pose desiredPose(const AdmittanceState& state,
                 AdmittanceFrame frame = AdmittanceFrame::kGripper);

// Re-express a wrench given in world axes in the controller axes (the
// reference frame's axes for AdmittanceFrame::kGripper).
Vector6d wrenchInControllerFrame(const Vector6d& world_wrench,
                                 const Pose& reference, AdmittanceFrame frame);

// 1/2 (x_e'^T M x_e' + x_e^T K x_e).
double admittanceEnergy(const AdmittanceState& state,
                        const AdmittanceParams& params);

}  // namespace artiprop

#endif  // ARTIPROP_ADMITTANCE_HPP_
