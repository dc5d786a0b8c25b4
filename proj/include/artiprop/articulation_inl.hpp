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

#ifndef ARTIPROP_ARTICULATION_INL_HPP_
#define ARTIPROP_ARTICULATION_INL_HPP_

#include <random>

namespace artiprop {

template <typename Rng>
Pose perturbPose(const Pose& pose, const PoseNoise& noise, Rng& rng) {
  if (noise.isZero()) return pose;
  std::normal_distribution<double> gauss(0.0, 1.0);
  Pose out = pose;
  if (noise.sigma_translation > 0.0) {
    const double dx = gauss(rng);
    const double dy = gauss(rng);
    const double dz = gauss(rng);
    out.translation += noise.sigma_translation * Vector3d(dx, dy, dz);
  }
  if (noise.sigma_rotation > 0.0) {
    // Uniform axis on the sphere from a normalized Gaussian triple.
    Vector3d axis;
    do {
      const double ax = gauss(rng);
      const double ay = gauss(rng);
      const double az = gauss(rng);
      axis = Vector3d(ax, ay, az);
    } while (axis.norm() < 1e-12);
    axis.normalize();
    const double angle = noise.sigma_rotation * gauss(rng);
    out.rotation = pose.rotation * expRotation(axis * angle);
  }
  return out;
}

}  // namespace artiprop

#endif  // ARTIPROP_ARTICULATION_INL_HPP_
