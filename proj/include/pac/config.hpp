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

#include <optional>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "pac/actuator_controller.hpp"
#include "pac/dynamics.hpp"
#include "pac/force_distribution.hpp"
#include "pac/manifold.hpp"
#include "pac/plant_simulator.hpp"
#include "pac/trajectory.hpp"

namespace pac {

struct RobotConfig {
  RobotModel model;
  ForceConstraints constraints;

  std::string controller_type = "pd";  // "pd" or "statespace"
  double kp = 0.0;                     // pd only
  double kd = 0.0;
  ControllerGains gains;

  SimConfig sim;
  Pose home;
  std::optional<Pose> initial_pose;  // defaults to the trajectory start
  Eigen::VectorXd workspace_lower;   // position bounds for sampling, may be empty
  Eigen::VectorXd workspace_upper;
  nlohmann::json trajectory;         // null when absent

  Manifold manifold() const { return model.geometry.manifold; }
  // The configured trajectory, or a hold at the home pose.
  Trajectory reference() const;
  Pose start_pose(const Trajectory& traj) const;
};

struct LoadOptions {
  // Reject gains that destabilize any load in {m0, 2 m0, 10 m0, infinity}.
  bool check_stability = true;
};

// Throws ParseError (with line) for malformed JSON and ValidationError naming
// the violated invariant: schema, body, actuator, constraints, gains,
// stability, sim, degenerate, rank, psd, workspace, trajectory.
RobotConfig parse_config(const std::string& text, const LoadOptions& options = {});
RobotConfig load_config(const std::string& path, const LoadOptions& options = {});

// Re-runs the cross-module checks on an already built config.
void validate_config(const RobotConfig& cfg, const LoadOptions& options = {});

nlohmann::json to_json(const RobotConfig& cfg);
std::string serialize_config(const RobotConfig& cfg);

// Load masses used by the stability gate.
std::vector<double> stability_masses(double m0);

}  // namespace pac
