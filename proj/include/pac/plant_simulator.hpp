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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pac/dynamics.hpp"
#include "pac/force_distribution.hpp"
#include "pac/system_controller.hpp"

namespace pac {

struct PlantState {
  Pose pose;
  Tangent twist;
  // Per-actuator force-lag states [f, f', ...] for models with c_i terms,
  // actuator-major. Empty for ideal actuators.
  Eigen::VectorXd actuator_state;
  double t = 0.0;

  static PlantState at_rest(const Pose& pose);
};

// Actual actuator forces for the given command and plant state.
ActuatorVector actuator_forces(const RobotModel& model, const PlantState& ps,
                               const ActuatorVector& f_c);

// One RK4 step of the plant under command forces f_c (held over dt), with an
// optional constant disturbance wrench. Throws NumericBlowup.
PlantState step_plant(const RobotModel& model, const PlantState& ps, const ActuatorVector& f_c,
                      double dt, const Cotangent& disturbance = Cotangent());

struct SimConfig {
  double dt_physics = 2.5e-4;
  double dt_control = 1e-3;
  double duration = 1.0;
  Cotangent disturbance;     // constant wrench, empty for none
  double noise_sigma = 0.0;  // additive Gaussian noise on measured actuator values
  std::uint64_t seed = 0;
  SystemControllerOptions controller;

  int substeps() const;
  // Throws ValidationError.
  void validate() const;
};

struct TraceRow {
  double t = 0.0;
  Eigen::VectorXd eta;      // plant pose, log coordinates
  Eigen::VectorXd eta_ref;  // reference pose, log coordinates
  Eigen::VectorXd theta_d;
  Eigen::VectorXd modes;    // pi_i . theta_d at the reference pose
  Eigen::VectorXd f_c;
  Eigen::VectorXd tensions;
  bool brake = false;
};

struct TraceLog {
  int dim = 0;
  int actuators = 0;
  std::vector<TraceRow> rows;
  std::string brake_reason;

  bool braked() const { return !rows.empty() && rows.back().brake; }
};

using ReferenceSource = std::function<ReferenceSample(double)>;
using TickObserver =
    std::function<void(double t, const PlantState&, const ControlStepResult&)>;

// Closed loop with ideal (optionally noisy) sensing of the actuator values.
// Control runs every dt_control, the plant every dt_physics with the command
// held. The run stops at the first Brake, which is logged.
TraceLog run_closed_loop(const RobotModel& model, const ControllerGains& gains,
                         const ForceConstraints& con, const ReferenceSource& reference,
                         const PlantState& initial, const SimConfig& sim,
                         const TickObserver& observer = {});

struct TrackingMetrics {
  double max_error = 0.0;  // max |theta_d|
  double rms_error = 0.0;
  std::vector<double> settling_time;  // per mode; +inf if never settled
  int brake_events = 0;
};

// Settling uses a band of `band` times the peak magnitude of each modal
// component. Throws Error on an empty trace.
TrackingMetrics tracking_metrics(const TraceLog& trace, double band = 0.02);

}  // namespace pac
