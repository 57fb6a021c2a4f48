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
#include <deque>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "pac/actuator_model.hpp"

namespace pac {

// A value followed by its time derivatives: [y, y', y'', ...].
using DerivativeStack = Eigen::VectorXd;

// Linear controller
//
//   x'  = A x + B e
//   a_c = r'' + (k0/m) r' + C x + D [e, e', ..., e^(l-1)]
//
// on the tracking error e = reference - actual.
struct ControllerGains {
  Eigen::MatrixXd A;     // s x s
  Eigen::VectorXd B;     // s
  Eigen::RowVectorXd C;  // s
  Eigen::RowVectorXd D;  // l
  double k0 = 0.0;       // back-EMF constant, N s/m
  double m0 = 0.0;       // no-load mass, kg

  int state_dim() const { return static_cast<int>(A.rows()); }
  int derivative_order() const { return static_cast<int>(D.size()); }
  // Throws DimensionMismatch on inconsistent shapes or l < 1.
  void validate() const;
};

// Proportional-derivative gains (s = 0, l = 2, D = [kp, kd]). kp must be
// positive; kd may be zero (a marginally stable controller) but not negative.
ControllerGains pd_gains(double kp, double kd, double k0, double m0);

ControllerGains state_space_gains(const Eigen::MatrixXd& A, const Eigen::VectorXd& B,
                                  const Eigen::RowVectorXd& C, const Eigen::RowVectorXd& D,
                                  double k0, double m0);

// f_c = m r'' + k0 r'. `ref` must hold at least [r, r', r''].
double open_loop_command(const ControllerGains& gains, double m, const DerivativeStack& ref);

// Zero-order-hold discretization of (A, B): x+ = Phi x + Gamma e.
struct Discretization {
  Eigen::MatrixXd phi;
  Eigen::VectorXd gamma;
};
Discretization discretize(const ControllerGains& gains, double dt);

struct FeedforwardResult {
  double command_accel = 0.0;
  Eigen::VectorXd state;
};

// One controller tick: a_c from the current state, then the state advanced
// exactly over dt with the error held constant.
FeedforwardResult feedforward_step(const ControllerGains& gains, const Eigen::VectorXd& x,
                                   const DerivativeStack& error, const DerivativeStack& ref,
                                   double m, double dt);

// Backward finite-difference estimate of the derivatives of a sampled
// signal. Orders without enough history are reported as zero.
class BackwardDifference {
 public:
  explicit BackwardDifference(int window = 3) : window_(window < 1 ? 1 : window) {}

  void push(const Eigen::VectorXd& sample);
  void clear() { samples_.clear(); }
  int size() const { return static_cast<int>(samples_.size()); }
  // Column j holds the j-th derivative of the latest sample, j < order.
  Eigen::MatrixXd stack(int order, double dt) const;

 private:
  int window_;
  std::deque<Eigen::VectorXd> samples_;  // newest first
};

// Closed-loop poles of the passively loaded actuator (mass m, +infinity for a
// clamped actuator) under the homogeneous part of the controller. Roots of
// P(s) det(sI - A) + Q(s) [C adj(sI - A) B + D(s) det(sI - A)], where
// P and Q are the load-normalised actuator polynomials.
std::vector<std::complex<double>> closed_loop_poles(const ControllerGains& gains,
                                                    const ActuatorModel& model, double m);

struct StabilityEntry {
  double mass = 0.0;
  double max_real_part = 0.0;
  bool stable = false;
  std::vector<std::complex<double>> poles;
};

struct StabilityReport {
  std::vector<StabilityEntry> entries;
  bool passed = false;
};

// Passes iff every closed-loop pole has real part below -1e-9 for every mass.
StabilityReport stability_check(const ControllerGains& gains, const ActuatorModel& model,
                                const std::vector<double>& masses);

// [r, r', r'', ...] at time t; at least three entries.
using ScalarReference = std::function<DerivativeStack(double)>;

struct SingleActuatorOptions {
  double initial_value = 0.0;
  double initial_rate = 0.0;
  bool start_on_reference = true;  // ignore initial_* and start at r(0), r'(0)
  int substeps = 4;                // RK4 steps per control tick
};

struct SingleActuatorTrace {
  std::vector<double> t;
  std::vector<double> value;          // l
  std::vector<double> error;          // r - l
  std::vector<double> command_accel;  // a_c
  std::vector<double> command_force;  // f_c = m a_c (NaN for m = infinity)
};

// Closed loop of one passively loaded actuator: the controller runs every dt
// on sampled values (derivatives by backward differences), the actuator law
// is integrated with a_c held between ticks. Throws NumericBlowup.
SingleActuatorTrace simulate_single_actuator(const ControllerGains& gains,
                                             const ActuatorModel& model, double m,
                                             const ScalarReference& reference, double dt,
                                             double duration,
                                             const SingleActuatorOptions& options = {});

}  // namespace pac
