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

#include <vector>

#include <Eigen/Dense>

#include "pac/manifold.hpp"

namespace pac {

// Actuator placement. Anchors are frame coordinates; attachments are body
// coordinates (the zero vector for point-mass models). Both are stored in
// 3-D; planar and 1-D models use the leading coordinates.
struct RobotGeometry {
  Manifold manifold = Manifold::kEuclidean2;
  std::vector<Eigen::Vector3d> anchors;
  std::vector<Eigen::Vector3d> attachments;

  int actuator_count() const { return static_cast<int>(anchors.size()); }
  int dim() const { return tangent_dim(manifold); }
};

// World position of every attachment point at pose eta, one per column.
Eigen::Matrix3Xd attachment_points(const RobotGeometry& geom, const Pose& eta);

// The actuator-value map: distance from each anchor to its attachment point.
// Throws DegenerateGeometry when a distance falls below 1e-12.
ActuatorVector inverse_kinematics(const RobotGeometry& geom, const Pose& eta);

// n x d_M derivative of inverse_kinematics. Point-mass rows are the unit
// anchor-to-attachment vectors; rigid-body rows are [u^T, (r x u)^T] with r
// the world-frame attachment offset.
Eigen::MatrixXd jacobian(const RobotGeometry& geom, const Pose& eta);

ActuatorVector actuator_rates(const RobotGeometry& geom, const Pose& eta, const Tangent& twist);

// phi . (d Lambda / d eta) phi, by central differences of the Jacobian along
// the retraction in the direction of phi.
ActuatorVector jacobian_directional_derivative(const RobotGeometry& geom, const Pose& eta,
                                               const Tangent& twist, double h = 1e-6);

struct ForwardKinematicsOptions {
  int max_iters = 50;
  double initial_damping = 1e-10;
  double max_damping = 1e12;
  double step_tolerance = 1e-12;
};

struct ForwardKinematicsResult {
  Pose pose;
  double residual_norm = 0.0;  // |L(pose) - l|
  int iterations = 0;
};

// Least-squares left inverse of inverse_kinematics: damped Gauss-Newton on
// |L(eta) - l|^2 started from `guess`. Throws NoConvergence or RankDeficient.
ForwardKinematicsResult forward_kinematics(const RobotGeometry& geom, const ActuatorVector& lengths,
                                           const Pose& guess,
                                           const ForwardKinematicsOptions& options = {});

}  // namespace pac
