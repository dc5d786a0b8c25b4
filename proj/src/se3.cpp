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

#include "artiprop/se3.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace artiprop {
namespace {

// Below this rotation angle logPose reports a pure translation.
constexpr double kPureTranslationAngle = 1e-12;

// Series thresholds for the screw coefficients.
constexpr double kSeriesAngle = 1e-3;

// (1 - cos t) / t^2
double coeffB(double theta) {
  if (theta < kSeriesAngle) {
    const double t2 = theta * theta;
    return 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  }
  const double s = std::sin(0.5 * theta);
  return 2.0 * s * s / (theta * theta);
}

// (t - sin t) / t^3
double coeffC(double theta) {
  if (theta < kSeriesAngle) {
    const double t2 = theta * theta;
    return 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
  }
  return (theta - std::sin(theta)) / (theta * theta * theta);
}

// (1 - (t/2) cot(t/2)) / t^2, the [w]^2 coefficient of the inverse left
// Jacobian.
double coeffInverseJacobian(double theta) {
  if (theta < kSeriesAngle) {
    const double t2 = theta * theta;
    return 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  }
  const double half = 0.5 * theta;
  return (1.0 - half * std::cos(half) / std::sin(half)) / (theta * theta);
}

}  // namespace

Matrix4d Pose::matrix() const {
  Matrix4d m = Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

Pose Pose::orthonormalized() const {
  Eigen::JacobiSVD<Matrix3d> svd(rotation,
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3d u = svd.matrixU();
  const Matrix3d v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return Pose(u * v.transpose(), translation);
}

bool Pose::isValid(double tolerance) const {
  if (!rotation.allFinite() || !translation.allFinite()) return false;
  const double ortho =
      (rotation.transpose() * rotation - Matrix3d::Identity()).norm();
  return ortho <= tolerance && rotation.determinant() > 0.0;
}

GaugedTwist canonicalize(const Twist& twist) {
  const double wn = twist.angular.norm();
  if (wn > kGaugeAngularEpsilon) {
    return {twist * (1.0 / wn), wn};
  }
  const double vn = twist.linear.norm();
  if (vn == 0.0) return {Twist(Vector3d::Zero(), Vector3d::UnitZ()), 0.0};
  return {Twist(Vector3d::Zero(), twist.linear / vn), vn};
}

bool isCanonical(const Twist& twist, double tolerance) {
  const double wn = twist.angular.norm();
  if (wn > tolerance) return std::abs(wn - 1.0) <= tolerance;
  return std::abs(twist.linear.norm() - 1.0) <= tolerance;
}

Matrix3d hat(const Vector3d& w) {
  Matrix3d m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return m;
}

Vector3d vee(const Matrix3d& m) {
  return Vector3d(m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)) *
         0.5;
}

Matrix3d expRotation(const Vector3d& rotation_vector) {
  const double theta = rotation_vector.norm();
  const Matrix3d w = hat(rotation_vector);
  if (theta < kSmallAngle) {
    return Matrix3d::Identity() + w + 0.5 * w * w;
  }
  return Matrix3d::Identity() + (std::sin(theta) / theta) * w +
         coeffB(theta) * w * w;
}

Vector3d logRotation(const Matrix3d& rotation) {
  const double c = std::clamp((rotation.trace() - 1.0) * 0.5, -1.0, 1.0);
  const Vector3d s_axis = vee(rotation);  // sin(theta) * axis
  const double s = s_axis.norm();
  const double theta = std::atan2(s, c);

  if (c > 0.0) {
    if (s == 0.0) return Vector3d::Zero();
    const double factor =
        theta < kSeriesAngle ? 1.0 + theta * theta / 6.0 : theta / s;
    return s_axis * factor;
  }

  // Near pi the antisymmetric part vanishes; read the axis off the
  // symmetric part, B = (1 - cos) a a^T, using its largest diagonal.
  const Matrix3d b =
      0.5 * (rotation + rotation.transpose()) - c * Matrix3d::Identity();
  Eigen::Index k = 0;
  b.diagonal().maxCoeff(&k);
  Vector3d axis = b.col(k).normalized();
  if (s > 1e-12) {
    if (axis.dot(s_axis) < 0.0) axis = -axis;
  } else if (axis(k) < 0.0) {
    axis = -axis;
  }
  return theta * axis;
}

Pose expTwist(const Twist& twist, double q) {
  const Vector3d w = twist.angular * q;
  const Vector3d v = twist.linear * q;
  const double theta = w.norm();
  const Matrix3d wh = hat(w);
  const Matrix3d wh2 = wh * wh;

  if (theta < kSmallAngle) {
    return Pose(Matrix3d::Identity() + wh + 0.5 * wh2,
                v + 0.5 * (wh * v) + (wh2 * v) / 6.0);
  }
  const double b = coeffB(theta);
  const Matrix3d r =
      Matrix3d::Identity() + (std::sin(theta) / theta) * wh + b * wh2;
  const Vector3d t = v + b * (wh * v) + coeffC(theta) * (wh2 * v);
  return Pose(r, t);
}

Vector6d logPoseVector(const Pose& pose) {
  const Vector3d w = logRotation(pose.rotation);
  const double theta = w.norm();
  const Matrix3d wh = hat(w);
  const Vector3d& t = pose.translation;
  const Vector3d v =
      t - 0.5 * (wh * t) + coeffInverseJacobian(theta) * (wh * (wh * t));
  Vector6d x;
  x << w, v;
  return x;
}

ScrewMotion logPose(const Pose& pose) {
  const Vector6d x = logPoseVector(pose);
  const double theta = x.head<3>().norm();
  if (theta < kPureTranslationAngle) {
    const double d = pose.translation.norm();
    if (d == 0.0) {
      return {Twist(Vector3d::Zero(), Vector3d::UnitZ()), 0.0};
    }
    return {Twist(Vector3d::Zero(), pose.translation / d), d};
  }
  return {Twist::FromVector(x / theta), theta};
}

Twist adjointMap(const Pose& transform, const Twist& twist) {
  const Vector3d w = transform.rotation * twist.angular;
  return Twist(w, transform.translation.cross(w) +
                      transform.rotation * twist.linear);
}

Matrix6d adjointMatrix(const Pose& transform) {
  Matrix6d ad = Matrix6d::Zero();
  ad.topLeftCorner<3, 3>() = transform.rotation;
  ad.bottomRightCorner<3, 3>() = transform.rotation;
  ad.bottomLeftCorner<3, 3>() = hat(transform.translation) * transform.rotation;
  return ad;
}

Eigen::Vector4d toQuaternionWxyz(const Matrix3d& rotation) {
  Eigen::Quaterniond quat(rotation);
  quat.normalize();
  Eigen::Vector4d out(quat.w(), quat.x(), quat.y(), quat.z());
  if (out(0) < 0.0) out = -out;
  return out;
}

Matrix3d rotationFromRpy(const Vector3d& rpy) {
  return (Eigen::AngleAxisd(rpy.z(), Vector3d::UnitZ()) *
          Eigen::AngleAxisd(rpy.y(), Vector3d::UnitY()) *
          Eigen::AngleAxisd(rpy.x(), Vector3d::UnitX()))
      .toRotationMatrix();
}

Vector3d rpyFromRotation(const Matrix3d& r) {
  const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
  if (std::abs(r(2, 0)) < 1.0 - 1e-12) {
    return Vector3d(std::atan2(r(2, 1), r(2, 2)), pitch,
                    std::atan2(r(1, 0), r(0, 0)));
  }
  // Gimbal lock: fold all yaw into roll.
  return Vector3d(std::atan2(-r(1, 2), r(1, 1)), pitch, 0.0);
}

}  // namespace artiprop
