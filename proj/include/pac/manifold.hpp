// Copyright 2026 The pac Authors.
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

#pragma once

#include <string>
#include <variant>

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace pac {

// Generalized velocity / acceleration / pose difference. For rigid bodies the
// layout is [linear (m/s); angular, world frame (rad/s)].
using Tangent = Eigen::VectorXd;
// Generalized force, paired with Tangent by the dot product.
using Cotangent = Eigen::VectorXd;
// One real per actuator: values, rates, forces, tensions.
using ActuatorVector = Eigen::VectorXd;

enum class Manifold { kEuclidean1, kEuclidean2, kEuclidean3, kRigid };

int tangent_dim(Manifold m);
// Number of reals in the serialized pose: d, or 7 (x y z qw qx qy qz).
int coordinate_count(Manifold m);
std::string manifold_name(Manifold m);
Manifold parse_manifold(const std::string& name);

struct EuclideanPose {
  Eigen::VectorXd coords;
};

struct RigidPose {
  Eigen::Vector3d position;
  Eigen::Quaterniond orientation;
};

class Pose {
 public:
  Pose() : Pose(euclidean(Eigen::VectorXd::Zero(1))) {}

  static Pose euclidean(const Eigen::VectorXd& coords);
  // The orientation is normalized; a (near) zero quaternion is rejected.
  static Pose rigid(const Eigen::Vector3d& position, const Eigen::Quaterniond& orientation);
  // Inverse of to_vector().
  static Pose from_vector(Manifold m, const Eigen::VectorXd& v);

  Manifold manifold() const;
  int dim() const { return tangent_dim(manifold()); }
  bool is_rigid() const { return std::holds_alternative<RigidPose>(v_); }

  // Body origin in world coordinates, zero padded to 3-D for Euclidean poses.
  Eigen::Vector3d position() const;
  // Identity for Euclidean poses.
  Eigen::Matrix3d rotation() const;
  Eigen::Quaterniond orientation() const;

  Eigen::VectorXd to_vector() const;

  const std::variant<EuclideanPose, RigidPose>& variant() const { return v_; }

 private:
  explicit Pose(std::variant<EuclideanPose, RigidPose> v) : v_(std::move(v)) {}
  std::variant<EuclideanPose, RigidPose> v_;
};

// eta (+) theta: translate, and for rigid poses rotate by exp(omega) applied
// on the world side.
Pose retract(const Pose& eta, const Tangent& theta);

// Tangent at eta1 pointing to eta2 with eta2 ~= retract(eta1, result).
// Rigid poses use the product-manifold logarithm (translation difference and
// rotation vector handled independently), angle in [0, pi].
Tangent pose_difference(const Pose& eta1, const Pose& eta2);

// d_M log-coordinates relative to the identity pose, used for traces.
Eigen::VectorXd pose_log_coordinates(const Pose& eta);

Eigen::Vector3d rotation_log(const Eigen::Quaterniond& q);
Eigen::Quaterniond rotation_exp(const Eigen::Vector3d& omega);

}  // namespace pac
