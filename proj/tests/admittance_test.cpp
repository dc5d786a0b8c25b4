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
#include <limits>
#include <stdexcept>

#include <gtest/gtest.h>

#include "artiprop/errors.hpp"
#include "test_util.hpp"

namespace artiprop {
namespace {

using testing::kPi;

Vector6d forceZ(double f) {
  Vector6d w = Vector6d::Zero();
  w(5) = f;
  return w;
}

// Critically damped unit-mass-normalized step response,
// x(t) = F/K (1 - (1 + w t) exp(-w t)), w = sqrt(K/M).
double criticalStep(double f, double k, double m, double t) {
  const double w = std::sqrt(k / m);
  return f / k * (1.0 - (1.0 + w * t) * std::exp(-w * t));
}

double simulateZ(const AdmittanceParams& p, double f, double dt, double t_end) {
  AdmittanceState s;
  const int n = static_cast<int>(std::lround(t_end / dt));
  for (int i = 0; i < n; ++i) s = stepAdmittance(s, p, forceZ(f), dt);
  return s.deviation(5);
}

TEST(AdmittanceTest, DefaultsAreCriticallyDamped) {
  const AdmittanceParams p = AdmittanceParams::Defaults();
  EXPECT_TRUE(p.isValid());
  EXPECT_DOUBLE_EQ(p.stiffness(2), 200.0);
  EXPECT_DOUBLE_EQ(p.damping(2), 2.0 * std::sqrt(200.0 * 2.0));
  EXPECT_DOUBLE_EQ(p.damping(3), 2.0 * std::sqrt(2.0 * 0.05));
  EXPECT_EQ(p.frame, AdmittanceFrame::kGripper);
}

TEST(AdmittanceTest, GainOrderSwapsHalves) {
  Vector6d g;
  g << 1, 2, 3, 4, 5, 6;
  Vector6d expected;
  expected << 4, 5, 6, 1, 2, 3;
  EXPECT_EQ(gainToMotionOrder(g), expected);
  EXPECT_EQ(motionToGainOrder(gainToMotionOrder(g)), g);
}

TEST(AdmittanceTest, SteadyStateDeflectionIsForceOverStiffness) {
  const AdmittanceParams p = AdmittanceParams::Defaults();
  EXPECT_NEAR(simulateZ(p, 10.0, 0.002, 5.0), 0.05, 0.05 * 1e-6);
}

TEST(AdmittanceTest, TorqueDeflectsOrientation) {
  const AdmittanceParams p = AdmittanceParams::Defaults();
  AdmittanceState s;
  Vector6d w = Vector6d::Zero();
  w(0) = 0.2;  // N m about x
  for (int i = 0; i < 5000; ++i) s = stepAdmittance(s, p, w, 0.002);
  EXPECT_NEAR(s.deviation(0), 0.1, 1e-8);
  EXPECT_NEAR(s.deviation.tail<3>().norm(), 0.0, 1e-15);
}

TEST(AdmittanceTest, MatchesAnalyticStepResponse) {
  const AdmittanceParams p = AdmittanceParams::Defaults();
  const double exact = criticalStep(10.0, 200.0, 2.0, 0.2);
  // First-order scheme: the error shrinks like dt, about 0.1 m/s * dt here.
  EXPECT_NEAR(simulateZ(p, 10.0, 1e-5, 0.2), exact, 5e-6);
}

TEST(AdmittanceTest, FirstOrderConvergenceInDt) {
  const AdmittanceParams p = AdmittanceParams::Defaults();
  const double t = 0.2;
  const double exact = criticalStep(10.0, 200.0, 2.0, t);
  const double e1 = std::abs(simulateZ(p, 10.0, 0.002, t) - exact);
  const double e2 = std::abs(simulateZ(p, 10.0, 0.001, t) - exact);
  const double e3 = std::abs(simulateZ(p, 10.0, 0.0005, t) - exact);
  EXPECT_GE(std::log2(e1 / e2), 0.9);
  EXPECT_GE(std::log2(e2 / e3), 0.9);
}

TEST(AdmittanceTest, NoOvershootWhenCriticallyDamped) {
  const AdmittanceParams p = AdmittanceParams::Defaults();
  AdmittanceState s;
  double peak = 0.0;
  for (int i = 0; i < 5000; ++i) {
    s = stepAdmittance(s, p, forceZ(10.0), 0.002);
    peak = std::max(peak, s.deviation(5));
  }
  EXPECT_LE(peak, 0.05 * (1.0 + 1e-9));
}

TEST(AdmittanceTest, ZeroInputEnergyNeverIncreases) {
  const AdmittanceParams p = AdmittanceParams::Defaults();
  AdmittanceState s;
  s.deviation << 0.3, -0.2, 0.1, 0.05, -0.04, 0.03;
  s.deviation_rate << -1.0, 0.5, 2.0, 0.2, 0.1, -0.3;
  double e = admittanceEnergy(s, p);
  for (int i = 0; i < 10000; ++i) {
    s = stepAdmittance(s, p, Vector6d::Zero(), 0.002);
    const double next = admittanceEnergy(s, p);
    ASSERT_LE(next, e * (1.0 + 1e-12)) << "step " << i;
    e = next;
  }
  EXPECT_LT(e, 1e-12);
}

TEST(AdmittanceTest, RejectsBadTimeStep) {
  const AdmittanceParams p = AdmittanceParams::Defaults();
  EXPECT_THROW(stepAdmittance({}, p, Vector6d::Zero(), 0.0), std::invalid_argument);
  EXPECT_THROW(stepAdmittance({}, p, Vector6d::Zero(), 0.06), std::invalid_argument);
  EXPECT_NO_THROW(stepAdmittance({}, p, Vector6d::Zero(), 0.05));
}

TEST(AdmittanceTest, NonFiniteInputIsReported) {
  const AdmittanceParams p = AdmittanceParams::Defaults();
  EXPECT_THROW(stepAdmittance({}, p, forceZ(std::numeric_limits<double>::quiet_NaN()),
                              0.002),
               NonFiniteState);
}

TEST(AdmittanceTest, DesiredPoseFrames) {
  AdmittanceState s;
  s.reference = Pose(expRotation(Vector3d(0, 0, kPi / 2)), Vector3d(1, 0, 0));
  s.deviation << 0, 0, 0, 0.1, 0, 0;
  // Gripper frame: offset along the reference's own x axis, which is world y.
  EXPECT_LT((desiredPose(s, AdmittanceFrame::kGripper).translation -
             Vector3d(1, 0.1, 0))
                .norm(),
            1e-15);
  EXPECT_LT((desiredPose(s, AdmittanceFrame::kWorld).translation -
             Vector3d(1.1, 0, 0))
                .norm(),
            1e-15);

  s.deviation << 0, 0, 0.2, 0, 0, 0;
  const Pose g = desiredPose(s, AdmittanceFrame::kGripper);
  const Pose w = desiredPose(s, AdmittanceFrame::kWorld);
  // About z both compositions agree because the rotations commute.
  EXPECT_TRUE(g.rotation.isApprox(w.rotation, 1e-14));
  EXPECT_TRUE(g.rotation.isApprox(expRotation(Vector3d(0, 0, kPi / 2 + 0.2)),
                                  1e-14));
}

TEST(AdmittanceTest, WrenchExpressedInGripperAxes) {
  const Pose ref(expRotation(Vector3d(0, 0, kPi / 2)), Vector3d(5, 5, 5));
  Vector6d w;
  w << 0, 1, 0, 0, 2, 0;  // world y
  const Vector6d g = wrenchInControllerFrame(w, ref, AdmittanceFrame::kGripper);
  Vector6d expected;
  expected << 1, 0, 0, 2, 0, 0;  // gripper x
  EXPECT_LT((g - expected).norm(), 1e-15);
  EXPECT_EQ(wrenchInControllerFrame(w, ref, AdmittanceFrame::kWorld), w);
}

TEST(AdmittanceTest, FrameNames) {
  EXPECT_EQ(admittanceFrameFromString("gripper"), AdmittanceFrame::kGripper);
  EXPECT_EQ(admittanceFrameFromString("world"), AdmittanceFrame::kWorld);
  EXPECT_FALSE(admittanceFrameFromString("tool"));
}

}  // namespace
}  // namespace artiprop
