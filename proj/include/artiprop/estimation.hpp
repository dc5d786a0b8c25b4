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

// Joint identification from a sequence of poses of a rigidly attached frame.
//
// Given poses P_0..P_{n-1}, finds the world-frame twist V and configurations
// q_1..q_{n-1} minimising
//
//   sum_i || W log(P_i^-1 exp(q_i [V]) P_0) ||^2,   q_0 = 0,
//
// with W = diag(1/sigma_rot * I3, 1/sigma_trans * I3).

#ifndef ARTIPROP_ESTIMATION_HPP_
#define ARTIPROP_ESTIMATION_HPP_

#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "artiprop/articulation.hpp"
#include "artiprop/se3.hpp"

namespace artiprop {

// Per-pose measurement uncertainty assumed by the estimator. The defaults
// are far looser than encoder accuracy so that grasp slip reads as noise
// rather than as a different joint.
struct NoiseModel {
  double sigma_translation = 0.005;           // m
  double sigma_rotation = 2.0 * std::numbers::pi / 180.0;  // rad
};

struct ClassificationThresholds {
  // Total rotation over the observed range below which the joint is
  // prismatic (rad).
  double prismatic_max_rotation = 0.02;
  // Axial translation per radian below which a rotating joint is revolute
  // (m/rad).
  double revolute_max_pitch = 1e-3;
};

struct SolverOptions {
  double initial_damping = 1e-3;
  double damping_factor = 10.0;
  int max_iterations = 200;
  double relative_tolerance = 1e-10;
};

struct EstimatorConfig {
  NoiseModel noise;
  ClassificationThresholds thresholds;
  SolverOptions solver;
  // Excitation needed before anything can be identified.
  double min_translation = 1e-4;  // m
  double min_rotation = 1e-3;     // rad
};

struct EstimationResult {
  Twist twist;                         // canonical gauge, world frame
  std::vector<double> configurations;  // one per pose, configurations[0] == 0
  double residual_rms = 0.0;           // weighted, per residual component
  JointType joint_type = JointType::kPrismatic;
  bool converged = false;
  int iterations = 0;
};

// Prismatic twist along the -Z axis of the grasp frame, expressed in the
// world frame.
Twist initialEstimateFromGrasp(const Pose& grasp_pose);

// Configuration of `pose` along `twist` relative to `reference`, by
// projecting the relative motion onto the twist in the reference body frame
// with the noise weights.
double projectConfiguration(const Pose& pose, const Pose& reference,
                            const Twist& twist, const NoiseModel& noise);

// Reusable estimator. Holds solver workspaces, so one instance must not be
// used from two threads at once; separate instances are independent.
class JointEstimator {
 public:
  explicit JointEstimator(EstimatorConfig config = {});

  const EstimatorConfig& config() const { return config_; }

  // Throws InsufficientData for fewer than 3 poses or no pose moving past
  // the excitation threshold relative to the first. Non-convergence is
  // reported through EstimationResult::converged.
  EstimationResult estimate(std::span<const Pose> poses,
                            const std::optional<Twist>& initial = std::nullopt);

 private:
  struct Candidate {
    Vector6d twist;
    std::vector<double> q;
    double cost = 0.0;
    bool converged = false;
    int iterations = 0;
  };

  void prepare(std::span<const Pose> poses);
  double evaluateCost(const Vector6d& twist, std::span<const double> q) const;
  Vector6d residual(std::size_t i, const Vector6d& twist, double q) const;
  void initialise(const Vector6d& twist, Candidate& out) const;
  void projectAll(const Vector6d& twist, std::vector<double>& q) const;
  void solve(Candidate& c);
  void refitConfigurations(const Vector6d& twist, std::vector<double>& q) const;
  EstimationResult finish(Candidate c);

  EstimatorConfig config_;
  Vector6d weights_;

  // Workspaces, sized to the current problem and reused across calls.
  std::vector<Pose> inverse_poses_;
  Pose first_pose_;
  std::vector<Vector6d> body_motions_;  // W log(P_0^-1 P_i)
  std::vector<Eigen::Matrix<double, 6, 5>> jac_twist_;
  std::vector<Vector6d> jac_q_;
  std::vector<Vector6d> res_;
};

// One-shot convenience wrapper around JointEstimator.
EstimationResult estimateJoint(std::span<const Pose> poses,
                               const NoiseModel& noise,
                               const std::optional<Twist>& initial = std::nullopt);

// Gauge-invariant shape descriptors of a (twist, configuration range) pair.
struct JointShape {
  double total_rotation = 0.0;  // rad over the configuration range
  double pitch = 0.0;           // m/rad; 0 when there is no rotation
};
JointShape describeJoint(const Twist& twist, double q_range);
JointType classifyJoint(const JointShape& shape,
                        const ClassificationThresholds& thresholds);

}  // namespace artiprop

#endif  // ARTIPROP_ESTIMATION_HPP_
