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

#include <Eigen/Dense>

#include "pac/manifold.hpp"

namespace pac {

// Permissible actuator forces: tension f0 - f at least t_min, command
// magnitude |f + fb| at most f_cmd_max (per actuator).
struct ForceConstraints {
  Eigen::VectorXd t_min;
  Eigen::VectorXd f_cmd_max;

  static ForceConstraints uniform(int n, double t_min, double f_cmd_max);
  int size() const { return static_cast<int>(t_min.size()); }
  // Throws ValidationError on negative t_min or non-positive f_cmd_max.
  void validate() const;
};

// Box [lo, hi] on f equivalent to membership in the constraint set.
struct ForceBounds {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

ForceBounds force_bounds(const ForceConstraints& con, const ActuatorVector& fb,
                         const ActuatorVector& f0);

bool in_constraint_set(const ForceConstraints& con, const ActuatorVector& f,
                       const ActuatorVector& fb, const ActuatorVector& f0, double tol = 1e-9);

// Minimum-norm f with J^T f = tau inside the constraint set, or nullopt when
// no such f exists. Dual active-set method on the bound constraints; the
// final active set is re-solved as an equality-constrained least-norm
// problem and KKT-checked. Throws RankDeficient unless J has full column rank.
std::optional<ActuatorVector> distribute(const Eigen::MatrixXd& jac, const Cotangent& tau,
                                         const ActuatorVector& fb, const ActuatorVector& f0,
                                         const ForceConstraints& con);

// Whether (tau, fb, f0) lies in the wrench set.
bool wrench_feasible(const Eigen::MatrixXd& jac, const Cotangent& tau, const ActuatorVector& fb,
                     const ActuatorVector& f0, const ForceConstraints& con);

}  // namespace pac
