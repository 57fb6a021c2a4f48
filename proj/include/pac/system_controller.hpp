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

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "pac/actuator_controller.hpp"
#include "pac/dynamics.hpp"
#include "pac/force_distribution.hpp"
#include "pac/kinematics.hpp"

namespace pac {

// Columns of `tangents` form the list (v_1, ..., v_k); column i of the result
// is sum_j mtx(i, j) v_j.
Eigen::MatrixXd matrix_action(const Eigen::MatrixXd& mtx, const Eigen::MatrixXd& tangents);

// Where M, mu, the Jacobian and the force distribution are evaluated.
enum class EvaluationPoint { kMeasured, kReference };

struct SystemControllerOptions {
  EvaluationPoint evaluate_at = EvaluationPoint::kMeasured;
  int derivative_window = 3;
  double velocity_damping = 1e-12;
  ForwardKinematicsOptions forward_kinematics;
};

struct SystemControllerState {
  Eigen::MatrixXd xi;                // d_M x s, one tangent per column
  BackwardDifference theta_history;  // recent pose errors
  BackwardDifference length_history; // recent measured actuator values
  std::optional<Pose> last_pose;     // forward-kinematics guess
  bool brake = false;

  static SystemControllerState initial(const RobotModel& model, const ControllerGains& gains,
                                       const SystemControllerOptions& options = {});
};

struct ReferenceSample {
  Pose pose;
  Tangent velocity;
  Tangent accel;
  double t = 0.0;
};

struct Forces {
  ActuatorVector f_c;
};
struct Brake {
  std::string reason;
};
using Command = std::variant<Forces, Brake>;

inline bool is_brake(const Command& c) { return std::holds_alternative<Brake>(c); }

// Intermediate quantities of one tick, for logging and tests. Entries past
// the point where the tick stopped are left empty.
struct ControlDiagnostics {
  std::optional<Pose> pose;
  Tangent twist_estimate;
  Tangent theta_d;
  Eigen::MatrixXd theta_stack;  // d_M x l
  Tangent accel_cmd;            // alpha_c
  Cotangent wrench_cmd;         // tau_c
  ActuatorVector f_b;
  ActuatorVector f0;
  ActuatorVector f_p;
  ActuatorVector tensions;      // f0 - f_p
};

struct ControlStepResult {
  Command command;
  SystemControllerState state;
  ControlDiagnostics diagnostics;
};

// One tick of the parallel-actuator control loop: pose from the measured
// actuator values, pose error and its derivatives, commanded acceleration
// from the single-actuator gains acting on tangents, commanded wrench,
// resistance and no-load forces, and a feasible force distribution (or a
// latched brake when the wrench leaves the wrench set).
ControlStepResult control_step(const RobotModel& model, const ControllerGains& gains,
                               const ForceConstraints& con, const SystemControllerState& state,
                               const ActuatorVector& measured, const ReferenceSample& ref,
                               double dt, const SystemControllerOptions& options = {});

struct ModeResponse {
  double modal_mass = 0.0;
  bool clamped = false;
  std::vector<std::complex<double>> poles;
  // Sum of -poles; for a second-order mode, the damping coefficient.
  double damping = 0.0;
};

// Closed-loop poles each decoupled error mode is expected to follow: the
// single-actuator loop with the load mass replaced by the modal mass.
std::vector<ModeResponse> predicted_modal_response(const RobotModel& model,
                                                   const ControllerGains& gains, const Pose& eta);

}  // namespace pac
