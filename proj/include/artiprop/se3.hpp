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

// Rigid-body geometry on SE(3): poses, twists, exponential and logarithm
// maps, adjoint transforms.
//
// Six-vectors (twists, wrenches, minimal pose coordinates) are always ordered
// angular part first, linear part second.

#ifndef ARTIPROP_SE3_HPP_
#define ARTIPROP_SE3_HPP_

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace artiprop {

using Vector3d = Eigen::Vector3d;
using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix3d = Eigen::Matrix3d;
using Matrix4d = Eigen::Matrix4d;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

// Rotation angles below this use the Taylor branch of exp.
inline constexpr double kSmallAngle = 1e-8;

// Rigid transform. Maps points from the local frame into the parent frame.
struct Pose {
  Matrix3d rotation = Matrix3d::Identity();
  Vector3d translation = Vector3d::Zero();

  Pose() = default;
  Pose(const Matrix3d& r, const Vector3d& t) : rotation(r), translation(t) {}

  static Pose Identity() { return Pose(); }
  static Pose FromTranslation(const Vector3d& t) {
    return Pose(Matrix3d::Identity(), t);
  }
  static Pose FromRotation(const Matrix3d& r) {
    return Pose(r, Vector3d::Zero());
  }

  Pose operator*(const Pose& other) const {
    return Pose(rotation * other.rotation,
                rotation * other.translation + translation);
  }
  Vector3d operator*(const Vector3d& point) const {
    return rotation * point + translation;
  }

  Pose inverse() const {
    const Matrix3d rt = rotation.transpose();
    return Pose(rt, -(rt * translation));
  }

  Matrix4d matrix() const;

  // Nearest pose with an exactly orthonormal rotation (polar decomposition).
  Pose orthonormalized() const;

  // ||R^T R - I|| and det(R) checks.
  bool isValid(double tolerance = 1e-9) const;
};

// Screw axis of a 1-DOF motion: x(q) = exp(q [V]).
struct Twist {
  Vector3d angular = Vector3d::Zero();
  Vector3d linear = Vector3d::Zero();

  Twist() = default;
  Twist(const Vector3d& w, const Vector3d& v) : angular(w), linear(v) {}

  static Twist FromVector(const Vector6d& x) {
    return Twist(x.head<3>(), x.tail<3>());
  }
  Vector6d vector() const {
    Vector6d x;
    x << angular, linear;
    return x;
  }

  Twist operator*(double s) const { return Twist(angular * s, linear * s); }
  Twist operator-() const { return Twist(-angular, -linear); }

  bool isFinite() const { return angular.allFinite() && linear.allFinite(); }
};

// Canonical gauge: unit angular part, or zero angular part and unit linear
// part. `scale` satisfies original = scale * twist, scale >= 0.
struct GaugedTwist {
  Twist twist;
  double scale = 0.0;
};

// Angular norms at or below this are treated as zero when choosing a gauge.
inline constexpr double kGaugeAngularEpsilon = 1e-12;

GaugedTwist canonicalize(const Twist& twist);
bool isCanonical(const Twist& twist, double tolerance = 1e-9);

// Twist together with the configuration that reaches a pose.
struct ScrewMotion {
  Twist twist;
  double q = 0.0;
};

Matrix3d hat(const Vector3d& w);
Vector3d vee(const Matrix3d& m);

Matrix3d expRotation(const Vector3d& rotation_vector);
// Rotation vector with angle in [0, pi].
Vector3d logRotation(const Matrix3d& rotation);

// exp(q [V]) by the closed-form screw formula.
Pose expTwist(const Twist& twist, double q);

// Inverse of expTwist. Returns a canonical twist and q >= 0.
ScrewMotion logPose(const Pose& pose);

// q * V for the (V, q) returned by logPose, as a 6-vector.
Vector6d logPoseVector(const Pose& pose);

// Ad_T V, the twist V expressed after moving its frame by T.
Twist adjointMap(const Pose& transform, const Twist& twist);
Matrix6d adjointMatrix(const Pose& transform);

// Unit quaternion (w, x, y, z) with w >= 0.
Eigen::Vector4d toQuaternionWxyz(const Matrix3d& rotation);

// Rotation from roll/pitch/yaw in radians, applied as Rz(yaw) Ry(pitch)
// Rx(roll).
Matrix3d rotationFromRpy(const Vector3d& rpy);
Vector3d rpyFromRotation(const Matrix3d& rotation);

}  // namespace artiprop

#endif  // ARTIPROP_SE3_HPP_
