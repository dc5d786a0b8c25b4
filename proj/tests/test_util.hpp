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

// Shared helpers for the unit tests.

#ifndef ARTIPROP_TESTS_TEST_UTIL_HPP_
#define ARTIPROP_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "artiprop/se3.hpp"

namespace artiprop::testing {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kDeg = kPi / 180.0;

inline Vector3d randomUnit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vector3d v;
  do {
    v = Vector3d(n(rng), n(rng), n(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

inline Vector3d randomVector(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vector3d(u(rng), u(rng), u(rng));
}

// Uniform over SO(3) via a normalized Gaussian quaternion.
inline Matrix3d randomRotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline Pose randomPose(std::mt19937_64& rng, double scale = 1.0) {
  return Pose(randomRotation(rng), randomVector(rng, scale));
}

// Reference exponential: the 4x4 matrix exponential of the twist matrix,
// computed by Eigen's Pade approximant.
inline Pose matrixExp(const Twist& twist, double q) {
  Matrix4d m = Matrix4d::Zero();
  m.topLeftCorner<3, 3>() = hat(twist.angular) * q;
  m.topRightCorner<3, 1>() = twist.linear * q;
  const Matrix4d e = m.exp();
  return Pose(e.topLeftCorner<3, 3>(), e.topRightCorner<3, 1>());
}

inline double poseDistance(const Pose& a, const Pose& b) {
  return std::max((a.rotation - b.rotation).cwiseAbs().maxCoeff(),
                  (a.translation - b.translation).cwiseAbs().maxCoeff());
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double angleBetweenLines(const Vector3d& a, const Vector3d& b) {
  return std::atan2(a.normalized().cross(b.normalized()).norm(),
                    std::abs(a.normalized().dot(b.normalized())));
}

}  // namespace artiprop::testing

#endif  // ARTIPROP_TESTS_TEST_UTIL_HPP_
