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

#include "pac/manifold.hpp"

#include <cmath>

#include "pac/errors.hpp"

namespace pac {

int tangent_dim(Manifold m) {
  switch (m) {
    case Manifold::kEuclidean1: return 1;
    case Manifold::kEuclidean2: return 2;
    case Manifold::kEuclidean3: return 3;
    case Manifold::kRigid: return 6;
  }
  return 0;
}

int coordinate_count(Manifold m) { return m == Manifold::kRigid ? 7 : tangent_dim(m); }

std::string manifold_name(Manifold m) {
  switch (m) {
    case Manifold::kEuclidean1: return "euclidean1";
    case Manifold::kEuclidean2: return "euclidean2";
    case Manifold::kEuclidean3: return "euclidean3";
    case Manifold::kRigid: return "se3";
  }
  return "";
}

Manifold parse_manifold(const std::string& name) {
  if (name == "euclidean1") return Manifold::kEuclidean1;
  if (name == "euclidean2") return Manifold::kEuclidean2;
  if (name == "euclidean3") return Manifold::kEuclidean3;
  if (name == "se3") return Manifold::kRigid;
  throw DimensionMismatch("unknown manifold '" + name + "'");
}

Pose Pose::euclidean(const Eigen::VectorXd& coords) {
  if (coords.size() < 1 || coords.size() > 3) {
    throw DimensionMismatch("euclidean pose must have 1 to 3 coordinates");
  }
  return Pose(EuclideanPose{coords});
}

Pose Pose::rigid(const Eigen::Vector3d& position, const Eigen::Quaterniond& orientation) {
  const double n = orientation.norm();
  if (!(n > 1e-12)) throw DimensionMismatch("orientation quaternion has zero norm");
  return Pose(RigidPose{position, Eigen::Quaterniond(orientation.coeffs() / n)});
}

Pose Pose::from_vector(Manifold m, const Eigen::VectorXd& v) {
  if (v.size() != coordinate_count(m)) {
    throw DimensionMismatch("pose for " + manifold_name(m) + " needs " +
                            std::to_string(coordinate_count(m)) + " values, got " +
                            std::to_string(v.size()));
  }
  if (m != Manifold::kRigid) return euclidean(v);
  return rigid(v.head<3>(), Eigen::Quaterniond(v(3), v(4), v(5), v(6)));
}

Manifold Pose::manifold() const {
  if (const auto* e = std::get_if<EuclideanPose>(&v_)) {
    return static_cast<Manifold>(e->coords.size() - 1);
  }
  return Manifold::kRigid;
}

Eigen::Vector3d Pose::position() const {
  if (const auto* e = std::get_if<EuclideanPose>(&v_)) {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    p.head(e->coords.size()) = e->coords;
    return p;
  }
  return std::get<RigidPose>(v_).position;
}

Eigen::Matrix3d Pose::rotation() const {
  if (is_rigid()) return std::get<RigidPose>(v_).orientation.toRotationMatrix();
  return Eigen::Matrix3d::Identity();
}

Eigen::Quaterniond Pose::orientation() const {
  if (is_rigid()) return std::get<RigidPose>(v_).orientation;
  return Eigen::Quaterniond::Identity();
}

Eigen::VectorXd Pose::to_vector() const {
  if (const auto* e = std::get_if<EuclideanPose>(&v_)) return e->coords;
  const auto& r = std::get<RigidPose>(v_);
  Eigen::VectorXd v(7);
  v << r.position, r.orientation.w(), r.orientation.x(), r.orientation.y(), r.orientation.z();
  return v;
}

Eigen::Vector3d rotation_log(const Eigen::Quaterniond& q_in) {
  Eigen::Quaterniond q = q_in.normalized();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const Eigen::Vector3d v = q.vec();
  const double s = v.norm();
  if (s < 1e-8) {
    // 2*atan2(s, w)/s ~= (2/w)(1 - s^2/(3 w^2))
    return (2.0 / q.w()) * (1.0 - s * s / (3.0 * q.w() * q.w())) * v;
  }
  return (2.0 * std::atan2(s, q.w()) / s) * v;
}

Eigen::Quaterniond rotation_exp(const Eigen::Vector3d& omega) {
  const double angle = omega.norm();
  double k;  // sin(angle/2)/angle
  if (angle < 1e-8) {
    k = 0.5 - angle * angle / 48.0;
  } else {
    k = std::sin(0.5 * angle) / angle;
  }
  Eigen::Quaterniond q;
  q.w() = std::cos(0.5 * angle);
  q.vec() = k * omega;
  return q;
}

static void check_tangent(const Pose& eta, const Tangent& theta) {
  if (theta.size() != eta.dim()) {
    throw DimensionMismatch("tangent has " + std::to_string(theta.size()) +
                            " components, manifold dimension is " + std::to_string(eta.dim()));
  }
}

Pose retract(const Pose& eta, const Tangent& theta) {
  check_tangent(eta, theta);
  if (const auto* e = std::get_if<EuclideanPose>(&eta.variant())) {
    return Pose::euclidean(e->coords + theta);
  }
  const auto& r = std::get<RigidPose>(eta.variant());
  return Pose::rigid(r.position + theta.head<3>(), rotation_exp(theta.tail<3>()) * r.orientation);
}

Tangent pose_difference(const Pose& eta1, const Pose& eta2) {
  if (eta1.manifold() != eta2.manifold()) {
    throw DimensionMismatch("pose_difference across different manifolds");
  }
  if (!eta1.is_rigid()) {
    return std::get<EuclideanPose>(eta2.variant()).coords -
           std::get<EuclideanPose>(eta1.variant()).coords;
  }
  Tangent d(6);
  d.head<3>() = eta2.position() - eta1.position();
  d.tail<3>() = rotation_log(eta2.orientation() * eta1.orientation().conjugate());
  return d;
}

Eigen::VectorXd pose_log_coordinates(const Pose& eta) {
  if (!eta.is_rigid()) return eta.to_vector();
  Eigen::VectorXd v(6);
  v << eta.position(), rotation_log(eta.orientation());
  return v;
}

}  // namespace pac
