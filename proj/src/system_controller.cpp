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

#include "pac/system_controller.hpp"

#include <limits>

#include "pac/errors.hpp"

namespace pac {

Eigen::MatrixXd matrix_action(const Eigen::MatrixXd& mtx, const Eigen::MatrixXd& tangents) {
  if (mtx.cols() != tangents.cols()) {
    throw DimensionMismatch("matrix_action: matrix has " + std::to_string(mtx.cols()) +
                            " columns but " + std::to_string(tangents.cols()) +
                            " tangents were given");
  }
  return tangents * mtx.transpose();
}

SystemControllerState SystemControllerState::initial(const RobotModel& model,
                                                     const ControllerGains& gains,
                                                     const SystemControllerOptions& options) {
  gains.validate();
  SystemControllerState s;
  s.xi = Eigen::MatrixXd::Zero(model.dim(), gains.state_dim());
  s.theta_history = BackwardDifference(std::max(options.derivative_window, gains.derivative_order()));
  s.length_history = BackwardDifference(2);
  return s;
}

ControlStepResult control_step(const RobotModel& model, const ControllerGains& gains,
                               const ForceConstraints& con, const SystemControllerState& state,
                               const ActuatorVector& measured, const ReferenceSample& ref,
                               double dt, const SystemControllerOptions& options) {
  if (!(dt > 0.0)) throw Error("dt must be positive");
  const int d = model.dim();
  if (ref.velocity.size() != d || ref.accel.size() != d) {
    throw DimensionMismatch("reference velocity/acceleration dimension");
  }
  if (state.xi.rows() != d || state.xi.cols() != gains.state_dim()) {
    throw DimensionMismatch("controller state does not match gains");
  }

  ControlStepResult out{Brake{"brake latched"}, state, {}};
  if (state.brake) return out;
  auto brake = [&](std::string reason) {
    out.command = Brake{std::move(reason)};
    out.state.brake = true;
    return out;
  };

  // Pose from the actuator values.
  Pose eta;
  try {
    eta = forward_kinematics(model.geometry, measured, state.last_pose.value_or(ref.pose),
                             options.forward_kinematics)
              .pose;
  } catch (const NoConvergence& e) {
    return brake(std::string("forward kinematics: ") + e.what());
  } catch (const RankDeficient& e) {
    return brake(std::string("forward kinematics: ") + e.what());
  }
  out.state.last_pose = eta;
  out.diagnostics.pose = eta;

  // Velocity from differenced actuator values through the Jacobian.
  const Eigen::MatrixXd J = jacobian(model.geometry, eta);
  out.state.length_history.push(measured);
  const ActuatorVector rates = out.state.length_history.stack(2, dt).col(1);
  const Eigen::MatrixXd normal = J.transpose() * J + options.velocity_damping *
                                                         Eigen::MatrixXd::Identity(d, d);
  const Tangent twist = normal.ldlt().solve(J.transpose() * rates);
  out.diagnostics.twist_estimate = twist;

  // Pose error and its derivative stack.
  const bool at_reference = options.evaluate_at == EvaluationPoint::kReference;
  const Tangent theta_d =
      at_reference ? Tangent(-pose_difference(ref.pose, eta)) : pose_difference(eta, ref.pose);
  out.state.theta_history.push(theta_d);
  const Eigen::MatrixXd theta_stack = out.state.theta_history.stack(gains.derivative_order(), dt);
  out.diagnostics.theta_d = theta_d;
  out.diagnostics.theta_stack = theta_stack;

  // Commanded acceleration, then advance xi.
  Tangent accel_cmd = ref.accel + matrix_action(gains.D, theta_stack).col(0);
  if (gains.state_dim() > 0) {
    accel_cmd += matrix_action(gains.C, state.xi).col(0);
    const Discretization dz = discretize(gains, dt);
    out.state.xi = matrix_action(dz.phi, state.xi) + theta_d * dz.gamma.transpose();
  }
  out.diagnostics.accel_cmd = accel_cmd;

  const Pose& eval_pose = at_reference ? ref.pose : eta;
  const Tangent& eval_twist = at_reference ? ref.velocity : twist;

  // Commanded wrench.
  const Eigen::MatrixXd M = mass_matrix(model, eval_pose);
  const Cotangent wrench = bias_force(model, eval_pose, eval_twist) + M * accel_cmd;
  out.diagnostics.wrench_cmd = wrench;

  // Resistance-overcoming and no-load forces.
  const ActuatorVector ref_rates = actuator_rates(model.geometry, ref.pose, ref.velocity);
  const ActuatorVector f_b = gains.k0 * ref_rates;
  const ActuatorVector f0 = no_load_forces(model, eval_pose, eval_twist, accel_cmd);
  out.diagnostics.f_b = f_b;
  out.diagnostics.f0 = f0;

  const Eigen::MatrixXd J_eval = at_reference ? jacobian(model.geometry, eval_pose) : J;
  const auto f_p = distribute(J_eval, wrench, f_b, f0, con);
  if (!f_p) return brake("out of workspace: commanded wrench is not achievable");
  out.diagnostics.f_p = *f_p;
  out.diagnostics.tensions = cable_tensions(f0, *f_p);
  out.command = Forces{*f_p + f_b};
  return out;
}

std::vector<ModeResponse> predicted_modal_response(const RobotModel& model,
                                                   const ControllerGains& gains, const Pose& eta) {
  const ModalDecomposition modes = modal_decomposition(model, eta);
  std::vector<ModeResponse> out;
  for (int i = 0; i < modes.size(); ++i) {
    ModeResponse r;
    r.modal_mass = modes.modal_masses(i);
    r.clamped = modes.clamped[i];
    r.poles = closed_loop_poles(gains, model.actuator, r.modal_mass);
    for (const auto& p : r.poles) r.damping -= p.real();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace pac
