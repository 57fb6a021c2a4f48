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

#include "pac/dynamics.hpp"

#include <cmath>
#include <limits>

#include "pac/errors.hpp"

namespace pac {

namespace {

constexpr double kClampedEigenvalue = 1e-12;

void check_twist(const RobotModel& model, const Tangent& v, const char* what) {
  if (v.size() != model.dim()) {
    throw DimensionMismatch(std::string(what) + " has " + std::to_string(v.size()) +
                            " components, expected " + std::to_string(model.dim()));
  }
}

// dM along the retraction in direction `dir`, central differences.
Eigen::MatrixXd mass_matrix_derivative(const RobotModel& model, const Pose& eta,
                                       const Tangent& dir, double h) {
  return (mass_matrix(model, retract(eta, h * dir)) - mass_matrix(model, retract(eta, -h * dir))) /
         (2.0 * h);
}

}  // namespace

Eigen::MatrixXd body_mass_matrix(const RobotModel& model, const Pose& eta) {
  const int d = model.dim();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d, d);
  if (eta.is_rigid()) {
    const Eigen::Matrix3d R = eta.rotation();
    M.topLeftCorner<3, 3>() = model.inertial.body_mass * Eigen::Matrix3d::Identity();
    M.bottomRightCorner<3, 3>() = R * model.inertial.inertia * R.transpose();
  } else {
    M.diagonal().setConstant(model.inertial.body_mass);
  }
  return M;
}

Eigen::MatrixXd mass_matrix(const RobotModel& model, const Pose& eta) {
  Eigen::MatrixXd M = body_mass_matrix(model, eta);
  if (model.actuator_inertia != 0.0) {
    const Eigen::MatrixXd J = jacobian(model.geometry, eta);
    M.noalias() += model.actuator_inertia * (J.transpose() * J);
  } else {
    jacobian(model.geometry, eta);
  }
  return M;
}

double kinetic_energy(const RobotModel& model, const Pose& eta, const Tangent& twist) {
  check_twist(model, twist, "twist");
  return 0.5 * twist.dot(mass_matrix(model, eta) * twist);
}

double potential_energy(const RobotModel& model, const Pose& eta) {
  return -model.inertial.body_mass * model.inertial.gravity.dot(eta.position());
}

Cotangent potential_gradient(const RobotModel& model, const Pose& eta) {
  Cotangent g = Cotangent::Zero(model.dim());
  const Eigen::Vector3d lin = -model.inertial.body_mass * model.inertial.gravity;
  if (eta.is_rigid()) {
    g.head<3>() = lin;
  } else {
    g = lin.head(model.dim());
  }
  return g;
}

Cotangent bias_force(const RobotModel& model, const Pose& eta, const Tangent& twist, double h) {
  check_twist(model, twist, "twist");
  const int d = model.dim();
  Cotangent mu = potential_gradient(model, eta);
  const double speed = twist.norm();
  if (speed == 0.0) {
    mass_matrix(model, eta);
    return mu;
  }

  // d/dt (M phi) contribution from the pose dependence of M.
  const Eigen::MatrixXd dM_dt = speed * mass_matrix_derivative(model, eta, twist / speed, h);
  mu += dM_dt * twist;

  // -1/2 grad (phi^T M phi)
  for (int i = 0; i < d; ++i) {
    const Tangent e = Tangent::Unit(d, i);
    mu(i) -= 0.5 * twist.dot(mass_matrix_derivative(model, eta, e, h) * twist);
  }

  // World-frame angular velocity is not a coordinate velocity: the rotational
  // momentum equation picks up -omega x p_omega.
  if (eta.is_rigid()) {
    const Eigen::VectorXd p = mass_matrix(model, eta) * twist;
    const Eigen::Vector3d omega = twist.tail<3>();
    mu.tail<3>() -= omega.cross(Eigen::Vector3d(p.tail<3>()));
  }
  return mu;
}

ActuatorVector no_load_forces(const RobotModel& model, const Pose& eta, const Tangent& twist,
                              const Tangent& accel) {
  check_twist(model, twist, "twist");
  check_twist(model, accel, "acceleration");
  const Eigen::MatrixXd J = jacobian(model.geometry, eta);
  if (model.m0 == 0.0) return ActuatorVector::Zero(model.actuator_count());
  return model.m0 * (J * accel + jacobian_directional_derivative(model.geometry, eta, twist));
}

ActuatorVector cable_tensions(const ActuatorVector& f0, const ActuatorVector& f) {
  if (f0.size() != f.size()) {
    throw DimensionMismatch("cable_tensions: f0 has " + std::to_string(f0.size()) +
                            " entries, f has " + std::to_string(f.size()));
  }
  return f0 - f;
}

Tangent forward_dynamics(const RobotModel& model, const Pose& eta, const Tangent& twist,
                         const Cotangent& tau) {
  check_twist(model, tau, "wrench");
  const Eigen::MatrixXd M = mass_matrix(model, eta);
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) throw SingularMass("mass matrix is not positive definite");
  return llt.solve(tau - bias_force(model, eta, twist));
}

ModalDecomposition modal_decomposition(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& jac) {
  const int d = static_cast<int>(mass.rows());
  if (mass.cols() != d || jac.cols() != d) throw DimensionMismatch("modal_decomposition shapes");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> mass_eig(mass);
  if (mass_eig.info() != Eigen::Success || !(mass_eig.eigenvalues().minCoeff() > 0.0)) {
    throw SingularMass("mass matrix is not positive definite");
  }
  const Eigen::MatrixXd inv_sqrt = mass_eig.operatorInverseSqrt();
  Eigen::MatrixXd n_sym = inv_sqrt * (jac.transpose() * jac) * inv_sqrt;
  n_sym = 0.5 * (n_sym + n_sym.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(n_sym);
  if (eig.info() != Eigen::Success) throw SingularMass("eigen-decomposition failed");

  ModalDecomposition out;
  out.eigenvalues.resize(d);
  out.modal_vectors.resize(d, d);
  out.modal_masses.resize(d);
  out.clamped.assign(d, false);
  for (int i = 0; i < d; ++i) {
    const int src = d - 1 - i;  // ascending -> descending
    const double lambda = eig.eigenvalues()(src);
    Eigen::VectorXd sigma = inv_sqrt * eig.eigenvectors().col(src);
    Eigen::Index imax;
    sigma.cwiseAbs().maxCoeff(&imax);
    if (sigma(imax) < 0.0) sigma = -sigma;
    out.eigenvalues(i) = lambda;
    out.modal_vectors.col(i) = sigma;
    if (lambda <= kClampedEigenvalue) {
      out.modal_masses(i) = std::numeric_limits<double>::infinity();
      out.clamped[i] = true;
    } else {
      out.modal_masses(i) = 1.0 / lambda;
    }
  }
  out.dual_vectors = out.modal_vectors.inverse().transpose();
  return out;
}

ModalDecomposition modal_decomposition(const RobotModel& model, const Pose& eta) {
  return modal_decomposition(mass_matrix(model, eta), jacobian(model.geometry, eta));
}

}  // namespace pac
