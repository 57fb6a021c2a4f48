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

#include "pac/plant_simulator.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "pac/errors.hpp"

namespace pac {

namespace {

constexpr double kBlowup = 1e9;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Order of the force-lag part of the actuator law (number of c_i terms up to
// the last non-zero one).
int lag_order(const ActuatorModel& m) {
  int q = static_cast<int>(m.c.size());
  while (q > 0 && m.c[q - 1] == 0.0) --q;
  return q;
}

void check_plant_model(const ActuatorModel& m) {
  for (std::size_t i = 1; i < m.k.size(); ++i) {
    if (m.k[i] != 0.0) throw Error("plant simulator supports only the k_0 velocity term");
  }
  for (double v : m.c_tilde) {
    if (v != 0.0) throw Error("plant simulator does not support command-derivative terms");
  }
}

// Packed state: pose coordinates (d, or 3 + quaternion), twist, lag states.
struct Layout {
  int pose;
  int twist;
  int lag;
  int size() const { return pose + twist + lag; }
};

Layout layout(const RobotModel& model) {
  const int d = model.dim();
  const int pose = model.geometry.manifold == Manifold::kRigid ? 7 : d;
  return {pose, d, model.actuator_count() * lag_order(model.actuator)};
}

Eigen::VectorXd pack(const RobotModel& model, const PlantState& ps) {
  const Layout L = layout(model);
  Eigen::VectorXd y(L.size());
  if (ps.pose.is_rigid()) {
    const Eigen::Quaterniond q = ps.pose.orientation();
    y.head<7>() << ps.pose.position(), q.w(), q.x(), q.y(), q.z();
  } else {
    y.head(L.pose) = ps.pose.to_vector();
  }
  y.segment(L.pose, L.twist) = ps.twist;
  if (L.lag > 0) {
    y.tail(L.lag) = ps.actuator_state.size() == L.lag ? ps.actuator_state
                                                      : Eigen::VectorXd::Zero(L.lag);
  }
  return y;
}

PlantState unpack(const RobotModel& model, const Eigen::VectorXd& y, double t) {
  const Layout L = layout(model);
  PlantState ps;
  ps.pose = Pose::from_vector(model.geometry.manifold, y.head(L.pose));
  ps.twist = y.segment(L.pose, L.twist);
  ps.actuator_state = y.tail(L.lag);
  ps.t = t;
  return ps;
}

Eigen::VectorXd derivative(const RobotModel& model, const Eigen::VectorXd& y,
                           const ActuatorVector& f_c, const Cotangent& disturbance) {
  const Layout L = layout(model);
  const PlantState ps = unpack(model, y, 0.0);
  const Eigen::MatrixXd J = jacobian(model.geometry, ps.pose);
  const ActuatorVector f = actuator_forces(model, ps, f_c);
  Cotangent tau = J.transpose() * f;
  if (disturbance.size() > 0) tau += disturbance;

  Eigen::VectorXd dy(L.size());
  if (ps.pose.is_rigid()) {
    dy.head<3>() = ps.twist.head<3>();
    const Eigen::Vector3d w = ps.twist.tail<3>();
    const Eigen::Vector4d q = y.segment<4>(3);  // w x y z
    // q' = 1/2 (0, omega) * q, world-frame omega.
    dy(3) = 0.5 * (-w.dot(q.tail<3>()));
    dy.segment<3>(4) = 0.5 * (q(0) * w + w.cross(Eigen::Vector3d(q.tail<3>())));
  } else {
    dy.head(L.pose) = ps.twist;
  }
  dy.segment(L.pose, L.twist) = forward_dynamics(model, ps.pose, ps.twist, tau);

  const int q = lag_order(model.actuator);
  if (q > 0) {
    const ActuatorVector rates = J * ps.twist;
    const auto& c = model.actuator.c;
    for (int k = 0; k < model.actuator_count(); ++k) {
      const auto s = ps.actuator_state.segment(k * q, q);
      auto ds = dy.segment(L.pose + L.twist + k * q, q);
      const double u = f_c(k) - model.k0() * rates(k);
      double rhs = u - s(0);
      for (int j = 1; j < q; ++j) {
        ds(j - 1) = s(j);
        rhs -= c[j - 1] * s(j);
      }
      ds(q - 1) = rhs / c[q - 1];
    }
  }
  return dy;
}

}  // namespace

PlantState PlantState::at_rest(const Pose& pose) {
  PlantState ps;
  ps.pose = pose;
  ps.twist = Tangent::Zero(pose.dim());
  return ps;
}

ActuatorVector actuator_forces(const RobotModel& model, const PlantState& ps,
                               const ActuatorVector& f_c) {
  check_plant_model(model.actuator);
  if (f_c.size() != model.actuator_count()) throw DimensionMismatch("command force length");
  const int q = lag_order(model.actuator);
  if (q == 0) {
    return f_c - model.k0() * actuator_rates(model.geometry, ps.pose, ps.twist);
  }
  ActuatorVector f(model.actuator_count());
  for (int k = 0; k < model.actuator_count(); ++k) {
    f(k) = ps.actuator_state.size() == model.actuator_count() * q ? ps.actuator_state(k * q) : 0.0;
  }
  return f;
}

PlantState step_plant(const RobotModel& model, const PlantState& ps, const ActuatorVector& f_c,
                      double dt, const Cotangent& disturbance) {
  check_plant_model(model.actuator);
  if (disturbance.size() != 0 && disturbance.size() != model.dim()) {
    throw DimensionMismatch("disturbance wrench dimension");
  }
  const Eigen::VectorXd y = pack(model, ps);
  const Eigen::VectorXd k1 = derivative(model, y, f_c, disturbance);
  const Eigen::VectorXd k2 = derivative(model, y + 0.5 * dt * k1, f_c, disturbance);
  const Eigen::VectorXd k3 = derivative(model, y + 0.5 * dt * k2, f_c, disturbance);
  const Eigen::VectorXd k4 = derivative(model, y + dt * k3, f_c, disturbance);
  const Eigen::VectorXd next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite() || next.lpNorm<Eigen::Infinity>() > kBlowup) {
    throw NumericBlowup("plant state diverged at t = " + std::to_string(ps.t + dt));
  }
  return unpack(model, next, ps.t + dt);  // unpack renormalizes the quaternion
}

int SimConfig::substeps() const {
  return static_cast<int>(std::lround(dt_control / dt_physics));
}

void SimConfig::validate() const {
  if (!(dt_physics > 0.0) || !(dt_control >= dt_physics)) {
    throw ValidationError("sim", "need 0 < dt_physics <= dt_control");
  }
  const double ratio = dt_control / dt_physics;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw ValidationError("sim", "dt_control must be an integer multiple of dt_physics");
  }
  if (!(duration > 0.0)) throw ValidationError("sim", "duration must be positive");
  if (!(noise_sigma >= 0.0)) throw ValidationError("sim", "noise_sigma must be non-negative");
}

TraceLog run_closed_loop(const RobotModel& model, const ControllerGains& gains,
                         const ForceConstraints& con, const ReferenceSource& reference,
                         const PlantState& initial, const SimConfig& sim,
                         const TickObserver& observer) {
  sim.validate();
  const int d = model.dim();
  const int n = model.actuator_count();
  TraceLog trace;
  trace.dim = d;
  trace.actuators = n;

  std::mt19937_64 rng(sim.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  PlantState plant = initial;
  SystemControllerState ctrl = SystemControllerState::initial(model, gains, sim.controller);
  const int substeps = sim.substeps();
  const double h = sim.dt_control / substeps;
  const long ticks = static_cast<long>(std::floor(sim.duration / sim.dt_control + 1e-9));

  for (long k = 0; k <= ticks; ++k) {
    const double t = static_cast<double>(k) * sim.dt_control;
    plant.t = t;
    const ReferenceSample ref = reference(t);

    ActuatorVector measured = inverse_kinematics(model.geometry, plant.pose);
    if (sim.noise_sigma > 0.0) {
      for (int i = 0; i < n; ++i) measured(i) += sim.noise_sigma * noise(rng);
    }
    ControlStepResult res =
        control_step(model, gains, con, ctrl, measured, ref, sim.dt_control, sim.controller);
    if (observer) observer(t, plant, res);

    TraceRow row;
    row.t = t;
    row.eta = pose_log_coordinates(plant.pose);
    row.eta_ref = pose_log_coordinates(ref.pose);
    row.theta_d = res.diagnostics.theta_d.size() == d ? res.diagnostics.theta_d
                                                       : Eigen::VectorXd::Constant(d, kNaN);
    row.modes = modal_decomposition(model, ref.pose).project(row.theta_d);
    row.brake = is_brake(res.command);
    if (row.brake) {
      row.f_c = Eigen::VectorXd::Constant(n, kNaN);
      row.tensions = Eigen::VectorXd::Constant(n, kNaN);
      trace.brake_reason = std::get<Brake>(res.command).reason;
      trace.rows.push_back(std::move(row));
      break;
    }
    const ActuatorVector f_c = std::get<Forces>(res.command).f_c;
    row.f_c = f_c;
    row.tensions = res.diagnostics.tensions;
    trace.rows.push_back(std::move(row));
    ctrl = std::move(res.state);
    if (k == ticks) break;

    for (int i = 0; i < substeps; ++i) {
      plant = step_plant(model, plant, f_c, h, sim.disturbance);
    }
  }
  return trace;
}

TrackingMetrics tracking_metrics(const TraceLog& trace, double band) {
  if (trace.rows.empty()) throw Error("tracking_metrics: empty trace");
  TrackingMetrics m;
  double sum_sq = 0.0;
  int count = 0;
  for (const TraceRow& r : trace.rows) {
    if (r.brake) ++m.brake_events;
    if (!r.theta_d.allFinite()) continue;
    const double e = r.theta_d.norm();
    m.max_error = std::max(m.max_error, e);
    sum_sq += e * e;
    ++count;
  }
  m.rms_error = count > 0 ? std::sqrt(sum_sq / count) : 0.0;

  const auto modes = trace.rows.front().modes.size();
  for (Eigen::Index i = 0; i < modes; ++i) {
    double peak = 0.0;
    for (const TraceRow& r : trace.rows) {
      if (std::isfinite(r.modes(i))) peak = std::max(peak, std::abs(r.modes(i)));
    }
    const double limit = band * peak;
    long last_outside = -1;
    for (std::size_t j = 0; j < trace.rows.size(); ++j) {
      const double v = trace.rows[j].modes(i);
      if (std::isfinite(v) && std::abs(v) > limit) last_outside = static_cast<long>(j);
    }
    double settle;
    if (peak == 0.0 || last_outside < 0) {
      settle = 0.0;
    } else if (last_outside + 1 < static_cast<long>(trace.rows.size())) {
      settle = trace.rows[last_outside + 1].t;
    } else {
      settle = std::numeric_limits<double>::infinity();
    }
    m.settling_time.push_back(settle);
  }
  return m;
}

}  // namespace pac
