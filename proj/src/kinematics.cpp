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

#include "pac/kinematics.hpp"

#include <cmath>
#include <string>

#include "pac/errors.hpp"

namespace pac {

namespace {

constexpr double kMinLength = 1e-12;

void check_pose(const RobotGeometry& geom, const Pose& eta) {
  if (eta.manifold() != geom.manifold) {
    throw DimensionMismatch("pose lives on " + manifold_name(eta.manifold()) +
                            " but geometry is " + manifold_name(geom.manifold));
  }
  if (geom.attachments.size() != geom.anchors.size()) {
    throw DimensionMismatch("anchor and attachment counts differ");
  }
}

}  // namespace

Eigen::Matrix3Xd attachment_points(const RobotGeometry& geom, const Pose& eta) {
  check_pose(geom, eta);
  const Eigen::Vector3d p = eta.position();
  const Eigen::Matrix3d R = eta.rotation();
  Eigen::Matrix3Xd w(3, geom.actuator_count());
  for (int k = 0; k < geom.actuator_count(); ++k) w.col(k) = p + R * geom.attachments[k];
  return w;
}

ActuatorVector inverse_kinematics(const RobotGeometry& geom, const Pose& eta) {
  const Eigen::Matrix3Xd w = attachment_points(geom, eta);
  ActuatorVector l(geom.actuator_count());
  for (int k = 0; k < geom.actuator_count(); ++k) {
    l(k) = (w.col(k) - geom.anchors[k]).norm();
    if (l(k) < kMinLength) {
      throw DegenerateGeometry("actuator " + std::to_string(k) + " anchor coincides with attachment");
    }
  }
  return l;
}

Eigen::MatrixXd jacobian(const RobotGeometry& geom, const Pose& eta) {
  const Eigen::Matrix3Xd w = attachment_points(geom, eta);
  const int n = geom.actuator_count();
  const int d = geom.dim();
  const Eigen::Vector3d p = eta.position();
  Eigen::MatrixXd J(n, d);
  for (int k = 0; k < n; ++k) {
    const Eigen::Vector3d diff = w.col(k) - geom.anchors[k];
    const double len = diff.norm();
    if (len < kMinLength) {
      throw DegenerateGeometry("actuator " + std::to_string(k) + " anchor coincides with attachment");
    }
    const Eigen::Vector3d u = diff / len;
    if (eta.is_rigid()) {
      const Eigen::Vector3d r = w.col(k) - p;
      J.row(k).head<3>() = u.transpose();
      J.row(k).tail<3>() = r.cross(u).transpose();
    } else {
      J.row(k) = u.head(d).transpose();
    }
  }
  return J;
}

ActuatorVector actuator_rates(const RobotGeometry& geom, const Pose& eta, const Tangent& twist) {
  if (twist.size() != geom.dim()) throw DimensionMismatch("twist dimension");
  return jacobian(geom, eta) * twist;
}

ActuatorVector jacobian_directional_derivative(const RobotGeometry& geom, const Pose& eta,
                                               const Tangent& twist, double h) {
  if (twist.size() != geom.dim()) throw DimensionMismatch("twist dimension");
  const double speed = twist.norm();
  if (speed == 0.0) {
    jacobian(geom, eta);  // still reports degenerate geometry
    return ActuatorVector::Zero(geom.actuator_count());
  }
  const Tangent dir = twist / speed;
  const Eigen::MatrixXd dJ =
      (jacobian(geom, retract(eta, h * dir)) - jacobian(geom, retract(eta, -h * dir))) / (2.0 * h);
  return speed * (dJ * twist);
}

ForwardKinematicsResult forward_kinematics(const RobotGeometry& geom, const ActuatorVector& lengths,
                                           const Pose& guess,
                                           const ForwardKinematicsOptions& options) {
  check_pose(geom, guess);
  if (lengths.size() != geom.actuator_count()) {
    throw DimensionMismatch("expected " + std::to_string(geom.actuator_count()) +
                            " actuator values, got " + std::to_string(lengths.size()));
  }
  const int d = geom.dim();
  Pose eta = guess;
  ActuatorVector r = inverse_kinematics(geom, eta) - lengths;
  double cost = r.squaredNorm();
  double damping = options.initial_damping;

  for (int iter = 1; iter <= options.max_iters; ++iter) {
    const Eigen::MatrixXd J = jacobian(geom, eta);
    const Eigen::VectorXd sv = J.jacobiSvd().singularValues();
    if (sv.size() < d || !(sv(d - 1) > 1e-12 * std::max(sv(0), 1e-300))) {
      throw RankDeficient("forward kinematics: Jacobian rank below " + std::to_string(d));
    }
    const Eigen::MatrixXd H = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;

    bool accepted = false;
    Tangent step;
    while (damping <= options.max_damping) {
      const Eigen::MatrixXd Hd = H + damping * Eigen::MatrixXd::Identity(d, d);
      step = -Hd.ldlt().solve(g);
      const Pose candidate = retract(eta, step);
      ActuatorVector rc;
      try {
        rc = inverse_kinematics(geom, candidate) - lengths;
      } catch (const DegenerateGeometry&) {
        damping *= 10.0;
        continue;
      }
      const double cost_c = rc.squaredNorm();
      if (cost_c <= cost) {
        eta = candidate;
        r = rc;
        cost = cost_c;
        damping = std::max(damping / 10.0, options.initial_damping);
        accepted = true;
        break;
      }
      damping *= 10.0;
    }
    // No descent at any damping: stationary to machine precision.
    if (!accepted) return {eta, std::sqrt(cost), iter};
    if (step.lpNorm<Eigen::Infinity>() <= options.step_tolerance) {
      return {eta, std::sqrt(cost), iter};
    }
  }
  throw NoConvergence("forward kinematics did not converge in " +
                      std::to_string(options.max_iters) + " iterations (residual " +
                      std::to_string(std::sqrt(cost)) + ")");
}

}  // namespace pac
