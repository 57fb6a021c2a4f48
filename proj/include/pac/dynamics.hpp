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

#include "pac/actuator_model.hpp"
#include "pac/kinematics.hpp"
#include "pac/manifold.hpp"

namespace pac {

struct InertialParams {
  double body_mass = 1.0;                                // kg
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Identity();  // body frame, kg m^2 (rigid only)
  Eigen::Vector3d gravity = Eigen::Vector3d::Zero();     // m/s^2, padded to 3-D
};

struct RobotModel {
  RobotGeometry geometry;
  InertialParams inertial;
  // Effective no-load mass of each actuator, used by the controller for the
  // no-load forces and by the modal analysis.
  double m0 = 0.0;
  // Reflected actuator inertia included in the plant mass matrix. Normally
  // equal to m0; a larger m0 than this makes M - m0 L^T L indefinite.
  double actuator_inertia = 0.0;
  ActuatorModel actuator;

  int dim() const { return geometry.dim(); }
  int actuator_count() const { return geometry.actuator_count(); }
  double k0() const { return actuator.k0(); }
};

// M = M_body + actuator_inertia * L^T L, with world-frame rotational inertia
// for rigid bodies.
Eigen::MatrixXd mass_matrix(const RobotModel& model, const Pose& eta);
Eigen::MatrixXd body_mass_matrix(const RobotModel& model, const Pose& eta);

double kinetic_energy(const RobotModel& model, const Pose& eta, const Tangent& twist);
// Gravity potential of the body, -m_b g . p.
double potential_energy(const RobotModel& model, const Pose& eta);
Cotangent potential_gradient(const RobotModel& model, const Pose& eta);

// mu in tau = M alpha + mu, from the Euler-Lagrange (Hamel, for the world-frame
// angular velocity) equations of l = 1/2 M(phi, phi) - v. Configuration
// derivatives of M use central differences with step h.
Cotangent bias_force(const RobotModel& model, const Pose& eta, const Tangent& twist,
                     double h = 1e-6);

// f0 = m0 L alpha + m0 phi . (dL/deta) phi
ActuatorVector no_load_forces(const RobotModel& model, const Pose& eta, const Tangent& twist,
                              const Tangent& accel);

// f0 - f.
ActuatorVector cable_tensions(const ActuatorVector& f0, const ActuatorVector& f);

// alpha = M^-1 (tau - mu).
Tangent forward_dynamics(const RobotModel& model, const Pose& eta, const Tangent& twist,
                         const Cotangent& tau);

struct ModalDecomposition {
  // Eigenvalues 1/m_i of N = M^-1 L^T L, sorted in decreasing order.
  Eigen::VectorXd eigenvalues;
  // Columns are the modal vectors sigma_i (tangents).
  Eigen::MatrixXd modal_vectors;
  // Columns are the dual vectors pi_i (cotangents), pi_i . sigma_j = delta_ij.
  Eigen::MatrixXd dual_vectors;
  // m_i = 1/eigenvalue_i, +infinity for clamped modes.
  Eigen::VectorXd modal_masses;
  std::vector<bool> clamped;

  int size() const { return static_cast<int>(eigenvalues.size()); }
  // pi_i . theta for every mode.
  Eigen::VectorXd project(const Tangent& theta) const { return dual_vectors.transpose() * theta; }
};

// Eigen-decomposition of N = M^-1 J^T J through the symmetric similar matrix
// M^-1/2 J^T J M^-1/2. Throws SingularMass unless M is positive definite.
ModalDecomposition modal_decomposition(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& jac);
ModalDecomposition modal_decomposition(const RobotModel& model, const Pose& eta);

}  // namespace pac
