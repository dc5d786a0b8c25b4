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

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "artiprop/errors.hpp"
#include "test_util.hpp"

namespace artiprop {
namespace {

using testing::kPi;
using testing::poseDistance;
using testing::randomPose;

TEST(ArticulationTest, RevoluteDoorQuarterTurn) {
  // Hinge along +z through (0.4, 0, 0); the handle starts at the origin.
  const JointModel door = JointModel::Revolute(
      Vector3d::UnitZ(), Vector3d(0.4, 0, 0), Pose::Identity(), 0.0, kPi);
  const Pose p = partPose(door, kPi / 2);
  EXPECT_LT((p.translation - Vector3d(0.4, -0.4, 0)).norm(), 1e-15);
  EXPECT_LT((p.rotation - expRotation(Vector3d(0, 0, kPi / 2)))
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
}

TEST(ArticulationTest, PrismaticDrawer) {
  const Pose zero(Matrix3d::Identity(), Vector3d(1, 2, 3));
  const JointModel drawer =
      JointModel::Prismatic(Vector3d(0, 0, -2), zero, 0.0, 0.3);
  EXPECT_EQ(drawer.type, JointType::kPrismatic);
  const Pose p = partPose(drawer, 0.25);
  EXPECT_TRUE(p.translation.isApprox(Vector3d(1, 2, 2.75)));
  EXPECT_TRUE(p.rotation.isIdentity(0.0));
  EXPECT_TRUE(drawer.axisDirection().isApprox(Vector3d(0, 0, -1)));
}

TEST(ArticulationTest, HelicalFullTurnAdvancesByPitch) {
  const double pitch = 0.01;
  const JointModel screw = JointModel::Helical(
      Vector3d::UnitX(), Vector3d(0, 1, 0), pitch, Pose::Identity(), 0.0,
      4 * kPi);
  const Pose p = partPose(screw, 2 * kPi);
  EXPECT_TRUE(p.rotation.isIdentity(1e-14));
  EXPECT_LT((p.translation - Vector3d(2 * kPi * pitch, 0, 0)).norm(), 1e-14);
  // Half a turn mirrors the origin through the axis line y = 1.
  const Pose h = partPose(screw, kPi);
  EXPECT_LT((h.translation - Vector3d(kPi * pitch, 2, 0)).norm(), 1e-14);
}

TEST(ArticulationTest, AxisPointIsClosestToOrigin) {
  const JointModel j = JointModel::Revolute(
      Vector3d(0, 0, 3), Vector3d(0.5, -0.2, 7.0), Pose::Identity(), -1, 1);
  EXPECT_TRUE(j.axisPoint().isApprox(Vector3d(0.5, -0.2, 0)));
  EXPECT_TRUE(j.axisDirection().isApprox(Vector3d::UnitZ()));
}

TEST(ArticulationTest, LimitsAreEnforced) {
  const JointModel j =
      JointModel::Prismatic(Vector3d::UnitX(), Pose::Identity(), 0.0, 0.3);
  EXPECT_THROW(partPose(j, 0.31), OutOfLimits);
  EXPECT_THROW(partPose(j, -0.01), OutOfLimits);
  EXPECT_NO_THROW(partPose(j, 0.3 + 1e-12));
  EXPECT_DOUBLE_EQ(j.clamp(0.5), 0.3);
  EXPECT_DOUBLE_EQ(j.clamp(-0.5), 0.0);
}

TEST(ArticulationTest, FactoriesRejectBadInput) {
  EXPECT_THROW(JointModel::Prismatic(Vector3d::Zero(), Pose(), 0, 1),
               std::invalid_argument);
  EXPECT_THROW(JointModel::Revolute(Vector3d::UnitZ(), Vector3d::Zero(), Pose(),
                                    1, 0),
               std::invalid_argument);
  EXPECT_THROW(JointModel::Helical(Vector3d::UnitZ(), Vector3d::Zero(), 0.0,
                                   Pose(), 0, 1),
               std::invalid_argument);
}

TEST(ArticulationTest, TransformJointCommutesWithPartPose) {
  std::mt19937_64 rng(31);
  const JointModel j = JointModel::Helical(Vector3d(1, 1, 0), Vector3d(0, 0, 1),
                                           0.02, randomPose(rng), -2, 2);
  const Pose t = randomPose(rng);
  const JointModel moved = transformJoint(j, t);
  for (double q : {-1.5, 0.0, 0.3, 1.9}) {
    EXPECT_LT(poseDistance(partPose(moved, q), t * partPose(j, q)), 1e-13);
  }
}

TEST(ArticulationTest, NoiselessSequenceIsExact) {
  const JointModel j = JointModel::Revolute(Vector3d::UnitY(), Vector3d::Zero(),
                                            Pose::Identity(), 0, 1);
  const std::vector<double> qs = {0.0, 0.5, 1.0};
  const auto poses = generatePoseSequence(j, qs, PoseNoise{}, 1);
  ASSERT_EQ(poses.size(), 3u);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    EXPECT_EQ(poseDistance(poses[i], partPose(j, qs[i])), 0.0);
  }
}

TEST(ArticulationTest, SequenceIsDeterministicInSeed) {
  const JointModel j =
      JointModel::Prismatic(Vector3d::UnitX(), Pose::Identity(), 0, 1);
  const std::vector<double> qs = {0.0, 0.1, 0.2, 0.3};
  const PoseNoise noise{0.01, 0.05};
  const auto a = generatePoseSequence(j, qs, noise, 42);
  const auto b = generatePoseSequence(j, qs, noise, 42);
  const auto c = generatePoseSequence(j, qs, noise, 43);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    EXPECT_EQ(poseDistance(a[i], b[i]), 0.0);
    EXPECT_GT(poseDistance(a[i], c[i]), 0.0);
  }
}

// Isotropic Gaussian per axis: |d| follows a Maxwell law with mean
// 2 sigma sqrt(2/pi); the rotation angle is |N(0, sigma)| with mean
// sigma sqrt(2/pi).
TEST(ArticulationTest, NoiseMagnitudeMatchesItsDistribution) {
  const double sigma_t = 0.002;
  const double sigma_r = 0.01;
  std::mt19937_64 rng(2024);
  const Pose base(expRotation(Vector3d(0.3, 0.2, 0.1)), Vector3d(1, 2, 3));
  const int n = 20000;
  double sum_t = 0.0;
  double sum_r = 0.0;
  for (int i = 0; i < n; ++i) {
    const Pose p = perturbPose(base, PoseNoise{sigma_t, sigma_r}, rng);
    sum_t += (p.translation - base.translation).norm();
    sum_r += logRotation(base.rotation.transpose() * p.rotation).norm();
    ASSERT_TRUE(p.isValid(1e-12));
  }
  const double expected_t = 2.0 * sigma_t * std::sqrt(2.0 / kPi);
  const double expected_r = sigma_r * std::sqrt(2.0 / kPi);
  EXPECT_NEAR(sum_t / n, expected_t, 0.05 * expected_t);
  EXPECT_NEAR(sum_r / n, expected_r, 0.05 * expected_r);
}

TEST(ArticulationTest, JointTypeNames) {
  for (JointType t :
       {JointType::kPrismatic, JointType::kRevolute, JointType::kHelical}) {
    EXPECT_EQ(jointTypeFromString(toString(t)), t);
  }
  EXPECT_FALSE(jointTypeFromString("spherical"));
}

}  // namespace
}  // namespace artiprop
