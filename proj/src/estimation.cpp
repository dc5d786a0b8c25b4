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

#include "artiprop/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "artiprop/errors.hpp"

namespace artiprop {
namespace {

using Matrix65d = Eigen::Matrix<double, 6, 5>;
using Matrix5d = Eigen::Matrix<double, 5, 5>;
using Vector5d = Eigen::Matrix<double, 5, 1>;

constexpr double kTwistStep = 1e-6;
constexpr double kConfigStep = 1e-6;
constexpr double kMaxDamping = 1e16;
// Weighted RMS below which the fit is exact to rounding.
constexpr double kExactFitRms = 1e-13;

// Orthonormal basis of the tangent space of the unit sphere at `x`.
Matrix65d tangentBasis(const Vector6d& x) {
  Eigen::HouseholderQR<Vector6d> qr(x);
  const Matrix6d q = qr.householderQ();
  return q.rightCols<5>();
}

}  // namespace

Twist initialEstimateFromGrasp(const Pose& grasp_pose) {
  return Twist(Vector3d::Zero(), -grasp_pose.rotation.col(2));
}

double projectConfiguration(const Pose& pose, const Pose& reference,
                            const Twist& twist, const NoiseModel& noise) {
  Vector6d w;
  w << Vector3d::Constant(1.0 / noise.sigma_rotation),
      Vector3d::Constant(1.0 / noise.sigma_translation);
  const Vector6d motion =
      w.cwiseProduct(logPoseVector(reference.inverse() * pose));
  const Vector6d axis =
      w.cwiseProduct(adjointMap(reference.inverse(), twist).vector());
  const double n2 = axis.squaredNorm();
  return n2 > 0.0 ? motion.dot(axis) / n2 : 0.0;
}

JointShape describeJoint(const Twist& twist, double q_range) {
  JointShape shape;
  const double wn = twist.angular.norm();
  shape.total_rotation = wn * std::abs(q_range);
  if (wn > 0.0) {
    shape.pitch = std::abs(twist.angular.dot(twist.linear)) / (wn * wn);
  }
  return shape;
}

JointType classifyJoint(const JointShape& shape,
                        const ClassificationThresholds& thresholds) {
  if (shape.total_rotation < thresholds.prismatic_max_rotation) {
    return JointType::kPrismatic;
  }
  if (shape.pitch < thresholds.revolute_max_pitch) return JointType::kRevolute;
  return JointType::kHelical;
}

JointEstimator::JointEstimator(EstimatorConfig config)
    : config_(std::move(config)) {
  weights_ << Vector3d::Constant(1.0 / config_.noise.sigma_rotation),
      Vector3d::Constant(1.0 / config_.noise.sigma_translation);
}

void JointEstimator::prepare(std::span<const Pose> poses) {
  const std::size_t n = poses.size();
  first_pose_ = poses.front();
  const Pose first_inv = first_pose_.inverse();
  inverse_poses_.resize(n);
  body_motions_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    inverse_poses_[i] = poses[i].inverse();
    body_motions_[i] =
        weights_.cwiseProduct(logPoseVector(first_inv * poses[i]));
  }
  jac_twist_.resize(n);
  jac_q_.resize(n);
  res_.resize(n);
}

Vector6d JointEstimator::residual(std::size_t i, const Vector6d& twist,
                                  double q) const {
  const Pose err =
      inverse_poses_[i] * expTwist(Twist::FromVector(twist), q) * first_pose_;
  return weights_.cwiseProduct(logPoseVector(err));
}

double JointEstimator::evaluateCost(const Vector6d& twist,
                                    std::span<const double> q) const {
  double cost = 0.0;
  for (std::size_t i = 1; i < q.size(); ++i) {
    cost += residual(i, twist, q[i]).squaredNorm();
  }
  return cost;
}

void JointEstimator::projectAll(const Vector6d& twist,
                                std::vector<double>& q) const {
  const Vector6d axis = weights_.cwiseProduct(
      adjointMap(first_pose_.inverse(), Twist::FromVector(twist)).vector());
  const double n2 = axis.squaredNorm();
  q.assign(body_motions_.size(), 0.0);
  if (n2 == 0.0) return;
  for (std::size_t i = 1; i < q.size(); ++i) {
    q[i] = body_motions_[i].dot(axis) / n2;
  }
}

void JointEstimator::initialise(const Vector6d& twist, Candidate& out) const {
  out.twist = twist.normalized();
  projectAll(out.twist, out.q);
  out.cost = evaluateCost(out.twist, out.q);
  out.converged = false;
  out.iterations = 0;
}

// Levenberg-Marquardt over (V on the unit sphere, q_1..q_{n-1}). The twist
// step is restricted to the sphere's tangent space, which removes the
// scale gauge (V, q) ~ (sV, q/s); the per-pose configurations are eliminated
// with a Schur complement so each iteration solves a 5x5 system.
void JointEstimator::solve(Candidate& c) {
  const SolverOptions& opt = config_.solver;
  const std::size_t n = c.q.size();
  const double count = 6.0 * static_cast<double>(n - 1);
  double lambda = opt.initial_damping;

  std::vector<double> hqq(n), gq(n), damped(n), trial_q(n), dq(n);
  std::vector<Vector5d> hvq(n);

  for (c.iterations = 0; c.iterations < opt.max_iterations; ++c.iterations) {
    if (std::sqrt(c.cost / count) < kExactFitRms) {
      c.converged = true;
      return;
    }

    const Matrix65d basis = tangentBasis(c.twist);
    Matrix5d hvv = Matrix5d::Zero();
    Vector5d gv = Vector5d::Zero();
    for (std::size_t i = 1; i < n; ++i) {
      res_[i] = residual(i, c.twist, c.q[i]);
      for (int k = 0; k < 5; ++k) {
        const Vector6d step = kTwistStep * basis.col(k);
        jac_twist_[i].col(k) = (residual(i, c.twist + step, c.q[i]) -
                                residual(i, c.twist - step, c.q[i])) /
                               (2.0 * kTwistStep);
      }
      jac_q_[i] = (residual(i, c.twist, c.q[i] + kConfigStep) -
                   residual(i, c.twist, c.q[i] - kConfigStep)) /
                  (2.0 * kConfigStep);
      const Matrix65d& jv = jac_twist_[i];
      hvv.noalias() += jv.transpose() * jv;
      gv.noalias() += jv.transpose() * res_[i];
      hvq[i] = jv.transpose() * jac_q_[i];
      hqq[i] = jac_q_[i].squaredNorm();
      gq[i] = jac_q_[i].dot(res_[i]);
    }

    double max_diag = hvv.diagonal().maxCoeff();
    for (std::size_t i = 1; i < n; ++i) max_diag = std::max(max_diag, hqq[i]);
    const double floor = std::max(max_diag, 1e-300) * 1e-12;

    bool accepted = false;
    while (!accepted) {
      Matrix5d s = hvv;
      Vector5d rhs = -gv;
      for (int k = 0; k < 5; ++k) {
        s(k, k) += lambda * std::max(hvv(k, k), floor);
      }
      for (std::size_t i = 1; i < n; ++i) {
        const double d = hqq[i] + lambda * std::max(hqq[i], floor);
        damped[i] = d;
        s.noalias() -= hvq[i] * hvq[i].transpose() / d;
        rhs.noalias() += hvq[i] * (gq[i] / d);
      }
      const Vector5d du = s.ldlt().solve(rhs);
      for (std::size_t i = 1; i < n; ++i) {
        dq[i] = (-gq[i] - hvq[i].dot(du)) / damped[i];
      }

      const Vector6d raw = c.twist + basis * du;
      const double scale = raw.norm();
      const Vector6d next_twist = raw / scale;
      trial_q[0] = 0.0;
      for (std::size_t i = 1; i < n; ++i) trial_q[i] = (c.q[i] + dq[i]) * scale;
      const double next_cost = evaluateCost(next_twist, trial_q);

      if (std::isfinite(next_cost) && next_cost < c.cost) {
        const double decrease = (c.cost - next_cost) / c.cost;
        c.twist = next_twist;
        c.q = trial_q;
        c.cost = next_cost;
        lambda = std::max(lambda / opt.damping_factor, 1e-12);
        accepted = true;
        if (decrease < opt.relative_tolerance) {
          c.converged = true;
          ++c.iterations;
          return;
        }
      } else {
        lambda *= opt.damping_factor;
        if (lambda > kMaxDamping) {
          // No descent direction left at working precision.
          c.converged = true;
          return;
        }
      }
    }
  }
  c.converged = false;
}

// Gauss-Newton on each configuration with the twist held fixed.
void JointEstimator::refitConfigurations(const Vector6d& twist,
                                         std::vector<double>& q) const {
  for (std::size_t i = 1; i < q.size(); ++i) {
    double qi = q[i];
    double cost = residual(i, twist, qi).squaredNorm();
    for (int it = 0; it < 50; ++it) {
      const Vector6d r = residual(i, twist, qi);
      const double h = kConfigStep * std::max(1.0, std::abs(qi));
      const Vector6d j =
          (residual(i, twist, qi + h) - residual(i, twist, qi - h)) / (2.0 * h);
      const double jj = j.squaredNorm();
      if (jj == 0.0) break;
      double step = -j.dot(r) / jj;
      bool improved = false;
      for (int halving = 0; halving < 30; ++halving) {
        const double cand = qi + step;
        const double c = residual(i, twist, cand).squaredNorm();
        if (c < cost) {
          qi = cand;
          cost = c;
          improved = true;
          break;
        }
        step *= 0.5;
      }
      if (!improved || std::abs(step) <= 1e-15 * (1.0 + std::abs(qi))) break;
    }
    q[i] = qi;
  }
}

EstimationResult JointEstimator::finish(Candidate c) {
  const std::size_t n = c.q.size();
  const GaugedTwist gauged = canonicalize(Twist::FromVector(c.twist));
  Twist twist = gauged.twist;
  std::vector<double> q = c.q;
  for (double& v : q) v *= gauged.scale;

  const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
  const JointShape shape = describeJoint(twist, *hi - *lo);
  const JointType type = classifyJoint(shape, config_.thresholds);

  bool snapped = false;
  if (type == JointType::kPrismatic && twist.angular.norm() > 0.0) {
    twist = Twist(Vector3d::Zero(), twist.linear.normalized());
    snapped = true;
  } else if (type == JointType::kRevolute) {
    const Vector3d w = twist.angular;
    twist.linear -= w.dot(twist.linear) * w;
    snapped = true;
  }
  if (snapped) {
    projectAll(twist.vector(), q);
    refitConfigurations(twist.vector(), q);
  }

  // Orient the twist so the observed motion has positive configurations.
  std::size_t far = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(q[i]) > std::abs(q[far])) far = i;
  }
  if (q[far] < 0.0) {
    twist = -twist;
    for (double& v : q) v = -v;
  }
  q[0] = 0.0;

  EstimationResult result;
  result.twist = twist;
  result.configurations = std::move(q);
  result.residual_rms = std::sqrt(
      evaluateCost(twist.vector(), result.configurations) / (6.0 * (n - 1)));
  result.joint_type = type;
  result.converged = c.converged;
  result.iterations = c.iterations;
  return result;
}

EstimationResult JointEstimator::estimate(std::span<const Pose> poses,
                                          const std::optional<Twist>& initial) {
  if (poses.size() < 3) {
    throw InsufficientData("joint estimation needs at least 3 poses, got " +
                           std::to_string(poses.size()));
  }
  const Pose first_inv = poses.front().inverse();
  bool excited = false;
  for (const Pose& p : poses) {
    const Pose rel = first_inv * p;
    if (rel.translation.norm() > config_.min_translation ||
        logRotation(rel.rotation).norm() > config_.min_rotation) {
      excited = true;
      break;
    }
  }
  if (!excited) {
    throw InsufficientData("pose sequence does not move past the excitation "
                           "threshold");
  }

  prepare(poses);

  // Data-driven start: the screw taking the first pose to the one that
  // moved furthest (in the weighted sense).
  std::size_t far = 1;
  for (std::size_t i = 2; i < poses.size(); ++i) {
    if (body_motions_[i].squaredNorm() > body_motions_[far].squaredNorm()) {
      far = i;
    }
  }
  std::vector<Vector6d> starts;
  if (initial && initial->isFinite() && initial->vector().norm() > 0.0) {
    starts.push_back(initial->vector());
  }
  starts.push_back(logPoseVector(poses[far] * first_inv));

  Candidate best;
  best.cost = std::numeric_limits<double>::infinity();
  for (const Vector6d& start : starts) {
    if (!(start.norm() > 0.0)) continue;
    Candidate c;
    initialise(start, c);
    solve(c);
    if (c.cost < best.cost) best = std::move(c);
  }
  return finish(std::move(best));
}

EstimationResult estimateJoint(std::span<const Pose> poses,
                               const NoiseModel& noise,
                               const std::optional<Twist>& initial) {
  EstimatorConfig config;
  config.noise = noise;
  JointEstimator estimator(config);
  return estimator.estimate(poses, initial);
}

}  // namespace artiprop
