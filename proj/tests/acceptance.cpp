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

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "pac/actuator_controller.hpp"
#include "pac/dynamics.hpp"
#include "pac/force_distribution.hpp"
#include "pac/kinematics.hpp"
#include "pac/plant_simulator.hpp"
#include "pac/system_controller.hpp"
#include "pac/trace_io.hpp"
#include "test_fixtures.hpp"

namespace pac {
namespace {

using namespace pac::testing;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const char* fmt, double value) {
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, value);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!ok) {
      pass = false;
      detail += " [!]";
    }
  }
};

ReferenceSample hold_sample(const Pose& pose, double t) {
  return ReferenceSample{pose, Tangent::Zero(pose.dim()), Tangent::Zero(pose.dim()), t};
}

ReferenceSource hold(const Pose& pose) {
  return [pose](double t) { return hold_sample(pose, t); };
}

Outcome kinematics_round_trip() {
  Outcome out;
  std::mt19937_64 rng(101);
  const auto p3 = p3_model().geometry;
  const auto rb = rigid_model().geometry;
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const Pose a = random_p3_pose(rng);
    worst = std::max(worst, pose_difference(forward_kinematics(p3, inverse_kinematics(p3, a), p3_home()).pose, a).norm());
    const Pose b = random_rigid_pose(rng);
    const Pose guess = retract(b, random_vector(rng, 6, 0.02));
    worst = std::max(worst, pose_difference(forward_kinematics(rb, inverse_kinematics(rb, b), guess).pose, b).norm());
  }
  out.require(worst <= 1e-8, "max |pose error| %.2e", worst);
  return out;
}

Outcome jacobian_and_virtual_work() {
  Outcome out;
  std::mt19937_64 rng(102);
  const auto p3 = p3_model().geometry;
  const auto rb = rigid_model().geometry;
  double worst_j = 0;
  for (int i = 0; i < 100; ++i) {
    const bool rigid = i % 2 == 1;
    const auto& g = rigid ? rb : p3;
    const Pose eta = rigid ? random_rigid_pose(rng) : random_p3_pose(rng);
    const Eigen::MatrixXd J = jacobian(g, eta);
    worst_j = std::max(worst_j, (J - numeric_jacobian(g, eta)).norm() / J.norm());
  }
  double worst_w = 0;
  for (int i = 0; i < 1000; ++i) {
    const Pose eta = random_rigid_pose(rng);
    const Eigen::MatrixXd J = jacobian(rb, eta);
    const Tangent phi = random_vector(rng, 6);
    const ActuatorVector f = random_vector(rng, 8);
    const double lhs = (J.transpose() * f).dot(phi);
    worst_w = std::max(worst_w, std::abs(lhs - (J * phi).dot(f)) / (1 + std::abs(lhs)));
  }
  out.require(worst_j <= 1e-6, "jacobian rel err %.2e", worst_j);
  out.require(worst_w <= 1e-12, "virtual work err %.2e", worst_w);
  return out;
}

Outcome modal_eigenstructure() {
  Outcome out;
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> m0d(0.01, 1.0), mbd(0.3, 3.0);
  double imag = 0, range = 0, eig = 0, dual = 0, psd = kInf;
  for (int i = 0; i < 200; ++i) {
    const bool rigid = i % 2 == 1;
    RobotModel model = rigid ? rigid_model() : p3_model();
    model.m0 = model.actuator_inertia = m0d(rng);
    model.inertial.body_mass = mbd(rng);
    const Pose eta = rigid ? random_rigid_pose(rng) : random_p3_pose(rng);
    const Eigen::MatrixXd J = jacobian(model.geometry, eta);
    const Eigen::MatrixXd M = mass_matrix(model, eta);
    const Eigen::MatrixXd N = M.llt().solve(J.transpose() * J);
    imag = std::max(imag, Eigen::EigenSolver<Eigen::MatrixXd>(N).eigenvalues().imag().cwiseAbs().maxCoeff());
    const auto md = modal_decomposition(M, J);
    for (int k = 0; k < md.size(); ++k) {
      const double ev = md.eigenvalues(k);
      range = std::max({range, -ev, ev - 1.0 / model.m0});
      const Tangent s = md.modal_vectors.col(k);
      eig = std::max(eig, (N * s - ev * s).norm() / std::max(1.0, s.norm()));
    }
    const Eigen::MatrixXd cross = md.dual_vectors.transpose() * md.modal_vectors;
    dual = std::max(dual, (cross - Eigen::MatrixXd::Identity(md.size(), md.size())).cwiseAbs().maxCoeff());
    const Eigen::MatrixXd gap = M - model.m0 * J.transpose() * J;
    psd = std::min(psd, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gap).eigenvalues().minCoeff());
  }
  const auto p3 = modal_decomposition(p3_model(), p3_home());
  const double masses = std::max(std::abs(p3.modal_masses(0) - 0.725), std::abs(p3.modal_masses(1) - 0.8142857));
  out.require(imag <= 1e-9, "max |imag eig| %.1e", imag);
  out.require(range <= 1e-9, "eig outside [0,1/m0] by %.1e", range);
  out.require(eig <= 1e-8, "eig residual %.1e", eig);
  out.require(dual <= 1e-9, "dual basis err %.1e", dual);
  out.require(psd >= -1e-9, "min eig(M - m0 J'J) %.3g", psd);
  out.require(masses <= 1e-6, "P3 modal mass err %.1e", masses);
  return out;
}

Outcome dynamics_oracle() {
  Outcome out;
  std::mt19937_64 rng(104);
  const auto p3 = p3_model();
  const auto rb = rigid_model();
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const bool rigid = i % 2 == 1;
    const auto& model = rigid ? rb : p3;
    const Pose eta = rigid ? random_rigid_pose(rng) : random_p3_pose(rng);
    const Tangent phi = random_vector(rng, eta.dim(), rigid ? 0.7 : 1.0);
    const Cotangent oracle = euler_lagrange_oracle(model, eta, phi);
    worst = std::max(worst, (bias_force(model, eta, phi) - oracle).norm() / std::max(1.0, oracle.norm()));
  }
  out.require(worst <= 1e-5, "bias force rel err %.2e", worst);

  const auto energy = [](const RobotModel& m, const PlantState& s) {
    return kinetic_energy(m, s.pose, s.twist) + potential_energy(m, s.pose);
  };
  double drift = 0;
  {
    const auto m = rigid_model(false);
    PlantState s = PlantState::at_rest(Pose::rigid(Eigen::Vector3d::Zero(), Eigen::Quaterniond::Identity()));
    s.twist = (Tangent(6) << 0.02, 0.0, 0.01, 0.3, -0.2, 0.5).finished();
    const double e0 = energy(m, s);
    for (int i = 0; i < 10000; ++i) s = step_plant(m, s, ActuatorVector::Zero(8), 1e-3);
    drift = std::max(drift, std::abs(energy(m, s) - e0) / e0);
  }
  {
    const auto m = p3_model(0.0, false);
    PlantState s = PlantState::at_rest(p3_home());
    s.twist = Eigen::Vector2d(0.1, 0.05);
    const double e0 = energy(m, s);
    for (int i = 0; i < 10000; ++i) s = step_plant(m, s, ActuatorVector::Zero(3), 1e-3);
    drift = std::max(drift, std::abs(energy(m, s) - e0) / e0);
  }
  out.require(drift <= 1e-6, "10 s energy drift %.2e", drift);
  return out;
}

Outcome force_distribution() {
  Outcome out;
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto model = p3_model();
  const auto con = p3_constraints();
  double worst = 0, residual = 0;
  int missing = 0;
  for (int i = 0; i < 200; ++i) {
    const Pose eta = i < 100 ? p3_home() : random_p3_pose(rng);
    const Eigen::MatrixXd J = jacobian(model.geometry, eta);
    const ActuatorVector fb = random_vector(rng, 3, 2.0);
    const ActuatorVector f0 = random_vector(rng, 3, 1.0);
    const auto box = force_bounds(con, fb, f0);
    ActuatorVector inside(3);
    for (int k = 0; k < 3; ++k) inside(k) = box.lo(k) + (box.hi(k) - box.lo(k)) * u(rng);
    const Cotangent tau = J.transpose() * inside;
    const auto f = distribute(J, tau, fb, f0, con);
    const auto oracle = brute_force(J, tau, box);
    if (!f || !oracle) {
      ++missing;
      continue;
    }
    worst = std::max(worst, (*f - *oracle).cwiseAbs().maxCoeff());
    residual = std::max(residual, (J.transpose() * *f - tau).cwiseAbs().maxCoeff());
  }
  const ActuatorVector z = ActuatorVector::Zero(3);
  const auto hold_f = distribute(jacobian(model.geometry, p3_home()), Eigen::Vector2d(0, 9.81), z, z, con);
  const double hold_err =
      hold_f ? (*hold_f - Eigen::Vector3d(-0.5, -0.5, -10.2572136)).cwiseAbs().maxCoeff() : kInf;
  out.require(missing == 0, "unsolved feasible cases %.0f", missing);
  out.require(worst <= 1e-6, "vs brute force %.2e", worst);
  out.require(residual <= 1e-8, "right-inverse residual %.2e", residual);
  out.require(hold_err <= 1e-7, "gravity hold err %.1e", hold_err);
  return out;
}

double settling_of(const std::vector<double>& t, const std::vector<double>& e) {
  TraceLog tr;
  tr.dim = 1;
  tr.actuators = 1;
  for (std::size_t k = 0; k < t.size(); ++k) {
    TraceRow r;
    r.t = t[k];
    r.theta_d = r.modes = Eigen::VectorXd::Constant(1, e[k]);
    tr.rows.push_back(r);
  }
  return tracking_metrics(tr).settling_time[0];
}

// Least-squares fit of e'' + c e' + k e = 0 to a sampled signal.
Eigen::Vector2d fit_second_order(const std::vector<double>& e, double dt, double t_end) {
  const double peak = std::abs(e.front());
  std::vector<Eigen::Vector3d> rows;
  for (std::size_t k = 1; k + 1 < e.size() && k * dt < t_end; ++k) {
    if (std::abs(e[k]) < 1e-3 * peak) continue;
    const double v = (e[k + 1] - e[k - 1]) / (2 * dt);
    const double a = (e[k + 1] - 2 * e[k] + e[k - 1]) / (dt * dt);
    rows.emplace_back(v, e[k], -a);
  }
  Eigen::MatrixXd A(rows.size(), 2);
  Eigen::VectorXd b(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    A.row(static_cast<Eigen::Index>(k)) << rows[k](0), rows[k](1);
    b(static_cast<Eigen::Index>(k)) = rows[k](2);
  }
  return A.colPivHouseholderQr().solve(b);
}

Outcome no_gain_scheduling() {
  Outcome out;
  SimConfig sim;
  sim.duration = 6.0;
  const Pose start = retract(p3_home(), Eigen::Vector2d(0.01, 0.01) / std::sqrt(2.0));

  // Critically damped settling from rest: (1 + 2t) exp(-2t) = 0.02.
  double lo = 1.0, hi = 6.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((1 + 2 * mid) * std::exp(-2 * mid) > 0.02 ? lo : hi) = mid;
  }
  const double closed_form = lo;

  {
    const auto model = p3_model();
    const auto gains = pd_gains(4, 4, 0, model.m0);
    const auto trace = run_closed_loop(model, gains, p3_constraints(), hold(p3_home()), PlantState::at_rest(start), sim);
    out.require(!trace.braked(), "braked %.0f", trace.braked());
    const auto md = modal_decomposition(model, p3_home());
    const auto metrics = tracking_metrics(trace);
    for (int i = 0; i < 2 && !trace.braked(); ++i) {
      SingleActuatorOptions opt;
      opt.start_on_reference = false;
      opt.initial_value = -trace.rows.front().modes(i);
      const auto single = simulate_single_actuator(gains, model.actuator, md.modal_masses(i),
                                                   [](double) { return DerivativeStack::Zero(3).eval(); },
                                                   sim.dt_control, sim.duration, opt);
      double num = 0, den = 0;
      for (std::size_t k = 0; k < single.error.size(); ++k) {
        const double diff = trace.rows[k].modes(i) - single.error[k];
        num += diff * diff;
        den += single.error[k] * single.error[k];
      }
      const double single_settle = settling_of(single.t, single.error);
      out.require(std::sqrt(num / den) <= 0.05, "mode RMS mismatch %.2e", std::sqrt(num / den));
      out.require(std::abs(metrics.settling_time[static_cast<std::size_t>(i)] - single_settle) <= 0.1 * single_settle,
                  "settle %.3f s", metrics.settling_time[static_cast<std::size_t>(i)]);
      out.require(std::abs(single_settle - closed_form) <= 0.1 * closed_form, "single %.3f s", single_settle);
    }
  }
  {
    const double k0 = 0.5;
    const auto model = p3_model(k0);
    const auto gains = pd_gains(4, 4, k0, model.m0);
    const auto trace = run_closed_loop(model, gains, p3_constraints(), hold(p3_home()), PlantState::at_rest(start), sim);
    out.require(!trace.braked(), "braked (k0) %.0f", trace.braked());
    const auto predicted = predicted_modal_response(model, gains, p3_home());
    for (int i = 0; i < 2 && !trace.braked(); ++i) {
      std::vector<double> e;
      for (const auto& r : trace.rows) e.push_back(r.modes(i));
      const Eigen::Vector2d ck = fit_second_order(e, sim.dt_control, 4.0);
      const auto& pr = predicted[static_cast<std::size_t>(i)];
      out.require(std::abs(ck(0) - pr.damping) <= 0.05 * pr.damping, "k0 damping %.4f", ck(0));
      // Fitted poles against the predicted ones.
      const std::complex<double> disc = std::sqrt(std::complex<double>(ck(0) * ck(0) - 4 * ck(1)));
      const std::complex<double> fit[2] = {(-ck(0) - disc) / 2.0, (-ck(0) + disc) / 2.0};
      double pole_err = 0;
      for (const auto& p : pr.poles) {
        const double d = std::min(std::abs(p - fit[0]), std::abs(p - fit[1]));
        pole_err = std::max(pole_err, d / std::abs(p));
      }
      out.require(pole_err <= 0.05, "pole rel err %.2e", pole_err);
    }
  }
  return out;
}

RobotModel hanging_mass(double k0) {
  RobotModel m;
  m.geometry.manifold = Manifold::kEuclidean1;
  m.geometry.anchors = {Eigen::Vector3d::Zero()};
  m.geometry.attachments = {Eigen::Vector3d::Zero()};
  m.inertial.body_mass = 1.0;
  m.inertial.gravity = Eigen::Vector3d(9.81, 0, 0);
  m.m0 = m.actuator_inertia = 0.1;
  m.actuator = ActuatorModel::ideal(k0);
  return m;
}

Outcome degeneration() {
  Outcome out;
  for (double k0 : {0.0, 0.3}) {
    const auto model = hanging_mass(k0);
    Eigen::MatrixXd A(1, 1);
    A << -0.5;
    const auto gains = state_space_gains(A, Eigen::VectorXd::Ones(1), Eigen::RowVectorXd::Constant(1, 2.0),
                                         Eigen::RowVector2d(4, 4), k0, model.m0);
    const auto reference = [](double t) {
      return ReferenceSample{Pose::euclidean(Eigen::VectorXd::Constant(1, 1.5 + 0.1 * std::sin(t))),
                             Tangent::Constant(1, 0.1 * std::cos(t)), Tangent::Constant(1, -0.1 * std::sin(t)), t};
    };
    SimConfig sim;
    sim.duration = 5.0;
    BackwardDifference errors(3);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(1);
    double worst = 0;
    const auto observer = [&](double t, const PlantState&, const ControlStepResult& res) {
      const ReferenceSample r = reference(t);
      const double l = inverse_kinematics(model.geometry, *res.diagnostics.pose)(0);
      errors.push(Eigen::VectorXd::Constant(1, r.pose.to_vector()(0) - l));
      DerivativeStack rs(3);
      rs << r.pose.to_vector()(0), r.velocity(0), r.accel(0);
      const double m = mass_matrix(model, *res.diagnostics.pose)(0, 0);
      const auto ff = feedforward_step(gains, x, errors.stack(2, sim.dt_control).row(0).transpose(), rs, m,
                                       sim.dt_control);
      x = ff.state;
      // The back-EMF share of the reference rate is carried by the bias force.
      const double alpha_c = res.diagnostics.accel_cmd(0) + (k0 / m) * r.velocity(0);
      worst = std::max(worst, std::abs(alpha_c - ff.command_accel));
    };
    const auto trace = run_closed_loop(model, gains, ForceConstraints::uniform(1, 0.1, 100.0), reference,
                                       PlantState::at_rest(reference(0).pose), sim, observer);
    out.require(!trace.braked() && trace.rows.size() == 5001, "braked %.0f", trace.braked());
    char label[64];
    std::snprintf(label, sizeof label, "k0=%.1f max |alpha_c - a_c| %%.1e", k0);
    out.require(worst <= 1e-12, label, worst);
  }
  return out;
}

Outcome stability_gate() {
  Outcome out;
  struct Case {
    double kp, kd, k0, m;
  };
  std::vector<Case> grid;
  for (double kp : {-1.0, 4.0}) {
    for (const auto& [kd, k0] : {std::pair{4.0, 0.0}, std::pair{-1.0, 0.5}}) {
      for (double m : {0.1, 1.0, 10.0, kInf}) grid.push_back({kp, kd, k0, m});
    }
  }
  for (double m : {0.1, 0.4, 1.0, kInf}) grid.push_back({2.0, -0.2, 0.1, m});
  int disagree = 0, stable = 0;
  for (const auto& c : grid) {
    const auto g = state_space_gains(Eigen::MatrixXd(0, 0), Eigen::VectorXd(0), Eigen::RowVectorXd(0),
                                     Eigen::RowVector2d(c.kp, c.kd), c.k0, 0.05);
    const double damping = c.kd + (std::isfinite(c.m) ? c.k0 / c.m : 0.0);
    const bool routh = c.kp > 0 && damping > 0;
    const bool verdict = stability_check(g, ActuatorModel::ideal(c.k0), {c.m}).passed;
    stable += routh;
    if (verdict != routh) {
      ++disagree;
      std::fprintf(stderr, "stability disagreement: kp %g kd %g k0 %g m %g\n", c.kp, c.kd, c.k0, c.m);
    }
  }
  out.require(grid.size() == 20, "cases %.0f", static_cast<double>(grid.size()));
  out.require(stable > 0 && stable < 20, "stable by Routh %.0f", stable);
  out.require(disagree == 0, "disagreements %.0f", disagree);
  return out;
}

std::string scratch(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("pac_acceptance_" + name)).string();
}

int run_cli(const std::string& args) {
  const int raw = std::system((std::string(PAC_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome brake_path() {
  Outcome out;
  const auto model = p3_model();
  const auto gains = pd_gains(4, 4, 0, model.m0);
  const auto con = p3_constraints();
  const Pose far = Pose::euclidean(Eigen::Vector2d(2, 20));
  const auto ref = [&](double t) { return hold_sample(t < 0.25 ? p3_home() : far, t); };
  SimConfig sim;
  double first_infeasible = -1, brake_t = -1;
  SystemControllerState latched;
  const auto observer = [&](double t, const PlantState&, const ControlStepResult& r) {
    const auto& d = r.diagnostics;
    if (d.wrench_cmd.size() > 0 && first_infeasible < 0 &&
        !wrench_feasible(jacobian(model.geometry, *d.pose), d.wrench_cmd, d.f_b, d.f0, con)) {
      first_infeasible = t;
    }
    if (is_brake(r.command) && brake_t < 0) {
      brake_t = t;
      latched = r.state;
    }
  };
  const auto trace = run_closed_loop(model, gains, con, ref, PlantState::at_rest(p3_home()), sim, observer);
  out.require(first_infeasible >= 0 && brake_t == first_infeasible, "brake at t=%.3f", brake_t);
  out.require(trace.braked() && trace.rows.back().brake, "brake row logged %.0f", trace.braked());
  int still = 0;
  const ActuatorVector l = inverse_kinematics(model.geometry, p3_home());
  SystemControllerState state = latched;
  for (int i = 0; i < 5; ++i) {
    const auto res = control_step(model, gains, con, state, l, hold_sample(p3_home(), 1.0 + i * 1e-3), 1e-3);
    state = res.state;
    still += is_brake(res.command);
  }
  out.require(still == 5, "latched after benign ticks %.0f/5", still);

  const std::string csv = scratch("brake.csv");
  const int code = run_cli("simulate --config " + data_path("fixture_p3.json") + " --trajectory " +
                           data_path("out_of_workspace.json") + " --out " + csv);
  out.require(code == 2, "cli exit %.0f", code);
  const auto logged = read_trace(csv);
  out.require(!logged.rows.empty() && logged.rows.back().brake, "cli brake row %.0f",
              logged.rows.empty() ? 0.0 : logged.rows.back().brake);
  return out;
}

Outcome determinism() {
  Outcome out;
  const std::string a = scratch("golden_a.csv"), b = scratch("golden_b.csv");
  const std::string cfg = data_path("golden_p3.json");
  const int ca = run_cli("simulate --config " + cfg + " --out " + a);
  const int cb = run_cli("simulate --config " + cfg + " --out " + b);
  const std::string ta = slurp(a), tb = slurp(b);
  out.require(ca == 0 && cb == 0, "exit %.0f", ca + cb);
  out.require(!ta.empty() && ta == tb, "identical bytes %.0f", ta.size());
  out.require(ta == slurp(data_path("golden_p3_trace.csv")), "matches frozen golden %.0f", static_cast<double>(ta.size()));
  return out;
}

}  // namespace
}  // namespace pac

int main() {
  struct Criterion {
    const char* name;
    double budget_s;  // wall-clock limit, infinite when unstated
    std::function<pac::Outcome()> run;
  };
  const double none = std::numeric_limits<double>::infinity();
  const std::vector<Criterion> criteria = {
      {"kinematics round trip", 5, pac::kinematics_round_trip},
      {"jacobian and virtual work", none, pac::jacobian_and_virtual_work},
      {"modal eigenstructure", 5, pac::modal_eigenstructure},
      {"dynamics oracle and energy", 30, pac::dynamics_oracle},
      {"force distribution", 10, pac::force_distribution},
      {"modal errors follow single actuator", 10, pac::no_gain_scheduling},
      {"single actuator degeneration", none, pac::degeneration},
      {"stability gate", none, pac::stability_gate},
      {"brake path", none, pac::brake_path},
      {"determinism", none, pac::determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    pac::Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > criteria[i].budget_s) o.pass = false;
    failed += !o.pass;
    std::printf("%s %2zu %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, secs,
                o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
