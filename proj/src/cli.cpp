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

#include "pac/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pac/config.hpp"
#include "pac/dynamics.hpp"
#include "pac/errors.hpp"
#include "pac/kinematics.hpp"
#include "pac/plant_simulator.hpp"
#include "pac/trace_io.hpp"
#include "pac/trajectory.hpp"

namespace pac {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.7g", v);
  return buf;
}

std::string fmt(const std::complex<double>& z) {
  const double im = z.imag();
  return fmt(z.real()) + (im < 0.0 ? "-" : "+") + fmt(std::abs(im)) + "i";
}

std::string join(const Eigen::VectorXd& v, const std::string& sep = ", ") {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? sep : "") + fmt(v(i));
  return s;
}

void print_matrix(std::ostream& out, const std::string& name, const Eigen::MatrixXd& m) {
  out << name << ":\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << "  " << join(m.row(r).transpose(), "  ") << "\n";
  }
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(cell, &used));
      if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw Error("cannot parse " + what + " '" + text + "'");
    }
  }
  return v;
}

int cmd_validate(const std::string& path, std::ostream& out) {
  const RobotConfig cfg = load_config(path);
  out << "ok: " << manifold_name(cfg.manifold()) << ", " << cfg.model.actuator_count()
      << " actuators, " << cfg.controller_type << " controller\n";
  return kExitOk;
}

int cmd_simulate(const std::string& config, const std::string& trajectory, const std::string& out_path,
                 const std::optional<std::uint64_t>& seed, std::ostream& out, std::ostream& err) {
  const RobotConfig cfg = load_config(config);
  const Trajectory traj =
      trajectory.empty() ? cfg.reference() : load_trajectory(trajectory, cfg.manifold(), cfg.home);
  SimConfig sim = cfg.sim;
  if (seed) sim.seed = *seed;
  const TraceLog trace =
      run_closed_loop(cfg.model, cfg.gains, cfg.constraints, [&](double t) { return traj.sample(t); },
                      PlantState::at_rest(cfg.start_pose(traj)), sim);
  write_trace(trace, out_path);
  if (trace.braked()) {
    err << "brake at t = " << fmt(trace.rows.back().t) << ": " << trace.brake_reason << "\n";
    return kExitBrake;
  }
  const TrackingMetrics metrics = tracking_metrics(trace);
  out << "ticks: " << trace.rows.size() << "\n"
      << "max error: " << fmt(metrics.max_error) << "\n"
      << "rms error: " << fmt(metrics.rms_error) << "\n";
  return kExitOk;
}

int cmd_analyze(const std::string& config, const std::string& pose_text, std::ostream& out) {
  const RobotConfig cfg = load_config(config);
  Pose eta = cfg.home;
  if (!pose_text.empty()) {
    const auto v = parse_list(pose_text, "pose");
    eta = Pose::from_vector(cfg.manifold(),
                            Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  const RobotModel& model = cfg.model;
  const Eigen::MatrixXd L = jacobian(model.geometry, eta);
  const Eigen::MatrixXd M = mass_matrix(model, eta);
  const ModalDecomposition modes = modal_decomposition(M, L);
  out << "pose: " << join(eta.to_vector()) << "\n";
  print_matrix(out, "jacobian", L);
  print_matrix(out, "mass matrix", M);
  out << "N eigenvalues: " << join(modes.eigenvalues) << "\n";
  out << "modal masses: " << join(modes.modal_masses) << "\n";
  const auto response = predicted_modal_response(model, cfg.gains, eta);
  for (std::size_t i = 0; i < response.size(); ++i) {
    out << "mode " << i + 1 << " (m = " << fmt(response[i].modal_mass) << "): poles";
    for (std::size_t p = 0; p < response[i].poles.size(); ++p) {
      out << (p ? ", " : " ") << fmt(response[i].poles[p]);
    }
    out << "; damping " << fmt(response[i].damping) << "\n";
  }
  return kExitOk;
}

int cmd_workspace(const std::string& config, const std::string& grid, const std::string& out_path,
                  std::ostream& out) {
  const RobotConfig cfg = load_config(config);
  const auto g = parse_list(grid, "grid");
  if (g.size() != 2 || g[0] < 1 || g[1] < 1 || g[0] != std::floor(g[0]) || g[1] != std::floor(g[1])) {
    throw Error("--grid expects NX,NY with positive integers");
  }
  if (cfg.workspace_lower.size() < 2) throw Error("workspace sampling needs at least two position bounds");
  const int nx = static_cast<int>(g[0]);
  const int ny = static_cast<int>(g[1]);
  const RobotModel& model = cfg.model;
  const int d = model.dim();
  const int n = model.actuator_count();

  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw Error("cannot open '" + out_path + "' for writing");
  f << "x,y,feasible,min_tension\n";
  int feasible_count = 0;
  const auto axis = [&](int k, int i, int count) {
    const double lo = cfg.workspace_lower(k), hi = cfg.workspace_upper(k);
    return count == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (count - 1);
  };
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      Eigen::VectorXd coords = cfg.home.to_vector();
      coords(0) = axis(0, ix, nx);
      coords(1) = axis(1, iy, ny);
      const Pose eta = Pose::from_vector(cfg.manifold(), coords);
      std::optional<ActuatorVector> sol;
      ActuatorVector f0;
      try {
        const Tangent zero = Tangent::Zero(d);
        const Cotangent tau = bias_force(model, eta, zero);
        f0 = no_load_forces(model, eta, zero, zero);
        sol = distribute(jacobian(model.geometry, eta), tau, ActuatorVector::Zero(n), f0, cfg.constraints);
      } catch (const DegenerateGeometry&) {
      } catch (const RankDeficient&) {
      }
      char buf[96];
      const double tmin = sol ? cable_tensions(f0, *sol).minCoeff() : std::nan("");
      std::snprintf(buf, sizeof buf, "%.9g,%.9g,%d,%.9g\n", coords(0), coords(1), sol ? 1 : 0, tmin);
      f << buf;
      if (sol) ++feasible_count;
    }
  }
  if (!f) throw Error("failed to write '" + out_path + "'");
  out << feasible_count << " of " << nx * ny << " poses can hold the static load\n";
  return kExitOk;
}

int cmd_tune_check(const std::string& config, std::ostream& out) {
  LoadOptions opts;
  opts.check_stability = false;
  const RobotConfig cfg = load_config(config, opts);
  const double m0 = cfg.model.m0;
  const std::vector<double> masses = {m0, 2.0 * m0, 10.0 * m0, 100.0 * m0,
                                      std::numeric_limits<double>::infinity()};
  const StabilityReport report = stability_check(cfg.gains, cfg.model.actuator, masses);
  for (const auto& e : report.entries) {
    out << "m = " << fmt(e.mass) << ": max real part " << fmt(e.max_real_part) << ", "
        << (e.stable ? "stable" : "UNSTABLE") << "\n";
  }
  out << (report.passed ? "stable over the mass sweep\n" : "unstable for some load mass\n");
  return report.passed ? kExitOk : kExitError;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Controller and simulator for parallel-actuator robots", "pac"};
  app.require_subcommand(1);

  std::string config, trajectory, out_path, pose, grid;
  std::optional<std::uint64_t> seed;

  auto* validate = app.add_subcommand("validate", "Load a config and run all checks");
  validate->add_option("--config", config, "Robot config (JSON)")->required()->check(CLI::ExistingFile);

  auto* simulate = app.add_subcommand("simulate", "Closed-loop simulation to a CSV trace");
  simulate->add_option("--config", config, "Robot config (JSON)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--trajectory", trajectory, "Reference (.json segments or .csv samples)")
      ->check(CLI::ExistingFile);
  simulate->add_option("--out", out_path, "Output trace CSV")->required();
  simulate->add_option("--seed", seed, "Sensor noise seed");

  auto* analyze = app.add_subcommand("analyze", "Jacobian, mass matrix and modal masses at a pose");
  analyze->add_option("--config", config, "Robot config (JSON)")->required()->check(CLI::ExistingFile);
  analyze->add_option("--pose", pose, "Comma separated pose coordinates (default: home)");

  auto* workspace = app.add_subcommand("workspace", "Static-hold feasibility over a pose grid");
  workspace->add_option("--config", config, "Robot config (JSON)")->required()->check(CLI::ExistingFile);
  workspace->add_option("--grid", grid, "NX,NY")->required();
  workspace->add_option("--out", out_path, "Output CSV")->required();

  auto* tune = app.add_subcommand("tune-check", "Closed-loop stability over a load-mass sweep");
  tune->add_option("--config", config, "Robot config (JSON)")->required()->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*validate) return cmd_validate(config, out);
    if (*simulate) return cmd_simulate(config, trajectory, out_path, seed, out, err);
    if (*analyze) return cmd_analyze(config, pose, out);
    if (*workspace) return cmd_workspace(config, grid, out_path, out);
    if (*tune) return cmd_tune_check(config, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

int run_command(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_command(args, std::cout, std::cerr);
}

}  // namespace pac
