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

#include "pac/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "pac/errors.hpp"
#include "pac/kinematics.hpp"

namespace pac {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void schema(const std::string& detail) { throw ValidationError("schema", detail); }

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) schema(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) schema("unknown key '" + key + "' in " + where);
  }
}

const json& require(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) schema("missing '" + key + "' in " + where);
  return j.at(key);
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) schema(what + " must be a number");
  return j.get<double>();
}

Eigen::VectorXd vector(const json& j, const std::string& what) {
  if (!j.is_array()) schema(what + " must be an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], what);
  return v;
}

Eigen::MatrixXd matrix(const json& j, const std::string& what) {
  if (!j.is_array()) schema(what + " must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd row = vector(j[static_cast<std::size_t>(r)], what);
    if (row.size() != cols) schema(what + " has ragged rows");
    m.row(r) = row.transpose();
  }
  return m;
}

// A scalar applies to every actuator.
Eigen::VectorXd per_actuator(const json& j, int n, const std::string& what) {
  if (j.is_number()) return Eigen::VectorXd::Constant(n, j.get<double>());
  const Eigen::VectorXd v = vector(j, what);
  if (v.size() != n) throw ValidationError("constraints", what + " needs one entry per actuator");
  return v;
}

Eigen::Vector3d point(const json& j, int d, const std::string& what) {
  const Eigen::VectorXd v = vector(j, what);
  if (v.size() != d && v.size() != 3) {
    schema(what + " needs " + std::to_string(d) + " or 3 coordinates");
  }
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  p.head(v.size()) = v;
  return p;
}

Pose pose(const json& j, Manifold m, const std::string& what) {
  const Eigen::VectorXd v = vector(j, what);
  if (v.size() != coordinate_count(m)) {
    schema(what + " needs " + std::to_string(coordinate_count(m)) + " coordinates");
  }
  try {
    return Pose::from_vector(m, v);
  } catch (const Error& e) {
    schema(what + ": " + e.what());
  }
}

std::vector<double> list(const json& j, const std::string& what) {
  const Eigen::VectorXd v = vector(j, what);
  return {v.data(), v.data() + v.size()};
}

json to_array(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json to_array(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(to_array(Eigen::VectorXd(m.row(r).transpose())));
  return rows;
}

// JSON has no infinity; unbounded command limits are written as null.
json limit_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (double x : v) out.push_back(std::isinf(x) ? json(nullptr) : json(x));
  return out;
}

Eigen::VectorXd limit_from_json(const json& j, int n) {
  if (j.is_null()) return Eigen::VectorXd::Constant(n, kInf);
  if (j.is_array()) {
    json copy = j;
    for (auto& x : copy) {
      if (x.is_null()) x = kInf;
    }
    return per_actuator(copy, n, "constraints.f_cmd_max");
  }
  return per_actuator(j, n, "constraints.f_cmd_max");
}

void parse_controller(const json& j, RobotConfig& cfg) {
  const std::string type = require(j, "type", "controller").is_string()
                               ? j.at("type").get<std::string>()
                               : std::string();
  const double k0 = cfg.model.k0();
  const double m0 = cfg.model.m0;
  cfg.controller_type = type;
  if (type == "pd") {
    check_keys(j, "controller", {"type", "kp", "kd"});
    cfg.kp = number(require(j, "kp", "controller"), "controller.kp");
    cfg.kd = number(require(j, "kd", "controller"), "controller.kd");
    cfg.gains = pd_gains(cfg.kp, cfg.kd, k0, m0);
  } else if (type == "statespace") {
    check_keys(j, "controller", {"type", "A", "B", "C", "D", "l"});
    const Eigen::MatrixXd A = matrix(require(j, "A", "controller"), "controller.A");
    const Eigen::VectorXd B = vector(require(j, "B", "controller"), "controller.B");
    const Eigen::VectorXd C = vector(require(j, "C", "controller"), "controller.C");
    const Eigen::VectorXd D = vector(require(j, "D", "controller"), "controller.D");
    if (j.contains("l") && number(j.at("l"), "controller.l") != static_cast<double>(D.size())) {
      throw ValidationError("gains", "controller.l must equal the length of D");
    }
    try {
      cfg.gains = state_space_gains(A, B, C.transpose(), D.transpose(), k0, m0);
    } catch (const DimensionMismatch& e) {
      throw ValidationError("gains", e.what());
    }
  } else {
    schema("controller.type must be \"pd\" or \"statespace\"");
  }
}

void parse_sim(const json& j, RobotConfig& cfg) {
  check_keys(j, "sim", {"dt_control", "dt_physics", "duration", "initial_pose", "noise_sigma",
                        "disturbance", "evaluate_at", "seed"});
  const Manifold m = cfg.manifold();
  SimConfig& sim = cfg.sim;
  if (j.contains("dt_control")) sim.dt_control = number(j.at("dt_control"), "sim.dt_control");
  if (j.contains("dt_physics")) sim.dt_physics = number(j.at("dt_physics"), "sim.dt_physics");
  if (j.contains("duration")) sim.duration = number(j.at("duration"), "sim.duration");
  if (j.contains("noise_sigma")) sim.noise_sigma = number(j.at("noise_sigma"), "sim.noise_sigma");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) schema("sim.seed must be a non-negative integer");
    sim.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("disturbance")) sim.disturbance = vector(j.at("disturbance"), "sim.disturbance");
  if (j.contains("initial_pose")) cfg.initial_pose = pose(j.at("initial_pose"), m, "sim.initial_pose");
  if (j.contains("evaluate_at")) {
    const json& e = j.at("evaluate_at");
    if (e == "measured") {
      sim.controller.evaluate_at = EvaluationPoint::kMeasured;
    } else if (e == "reference") {
      sim.controller.evaluate_at = EvaluationPoint::kReference;
    } else {
      schema("sim.evaluate_at must be \"measured\" or \"reference\"");
    }
  }
}

RobotConfig from_json(const json& j) {
  check_keys(j, "config", {"manifold", "actuators", "body", "actuator_params", "constraints",
                           "controller", "home_pose", "workspace", "sim", "trajectory"});
  RobotConfig cfg;

  const json& man = require(j, "manifold", "config");
  if (!man.is_string()) schema("manifold must be a string");
  Manifold m;
  try {
    m = parse_manifold(man.get<std::string>());
  } catch (const Error& e) {
    schema(e.what());
  }
  const int d = tangent_dim(m);
  RobotGeometry& geom = cfg.model.geometry;
  geom.manifold = m;

  const json& acts = require(j, "actuators", "config");
  if (!acts.is_array() || acts.empty()) schema("actuators must be a non-empty array");
  const int pd = m == Manifold::kRigid ? 3 : d;
  for (const json& a : acts) {
    check_keys(a, "actuator", {"anchor", "attachment"});
    geom.anchors.push_back(point(require(a, "anchor", "actuator"), pd, "anchor"));
    geom.attachments.push_back(a.contains("attachment") ? point(a.at("attachment"), pd, "attachment")
                                                        : Eigen::Vector3d::Zero());
  }
  const int n = geom.actuator_count();

  const json& body = require(j, "body", "config");
  check_keys(body, "body", {"mass", "inertia", "gravity"});
  cfg.model.inertial.body_mass = number(require(body, "mass", "body"), "body.mass");
  if (body.contains("inertia")) {
    const Eigen::MatrixXd I = matrix(body.at("inertia"), "body.inertia");
    if (I.rows() != 3 || I.cols() != 3) schema("body.inertia must be 3 x 3");
    cfg.model.inertial.inertia = I;
  }
  if (body.contains("gravity")) cfg.model.inertial.gravity = point(body.at("gravity"), pd, "body.gravity");

  const json& ap = require(j, "actuator_params", "config");
  check_keys(ap, "actuator_params", {"m0", "k0", "inertia", "c", "higher_k", "c_tilde"});
  cfg.model.m0 = number(require(ap, "m0", "actuator_params"), "actuator_params.m0");
  cfg.model.actuator = ActuatorModel::ideal(ap.contains("k0") ? number(ap.at("k0"), "actuator_params.k0") : 0.0);
  cfg.model.actuator_inertia =
      ap.contains("inertia") ? number(ap.at("inertia"), "actuator_params.inertia") : cfg.model.m0;
  if (ap.contains("c")) cfg.model.actuator.c = list(ap.at("c"), "actuator_params.c");
  if (ap.contains("higher_k")) {
    for (double k : list(ap.at("higher_k"), "actuator_params.higher_k")) cfg.model.actuator.k.push_back(k);
  }
  if (ap.contains("c_tilde")) cfg.model.actuator.c_tilde = list(ap.at("c_tilde"), "actuator_params.c_tilde");

  const json& con = require(j, "constraints", "config");
  check_keys(con, "constraints", {"t_min", "f_cmd_max"});
  cfg.constraints.t_min = per_actuator(require(con, "t_min", "constraints"), n, "constraints.t_min");
  cfg.constraints.f_cmd_max = limit_from_json(con.contains("f_cmd_max") ? con.at("f_cmd_max") : json(), n);

  parse_controller(require(j, "controller", "config"), cfg);

  cfg.home = pose(require(j, "home_pose", "config"), m, "home_pose");
  if (j.contains("workspace")) {
    const json& ws = j.at("workspace");
    check_keys(ws, "workspace", {"lower", "upper"});
    cfg.workspace_lower = vector(require(ws, "lower", "workspace"), "workspace.lower");
    cfg.workspace_upper = vector(require(ws, "upper", "workspace"), "workspace.upper");
  }
  if (j.contains("sim")) parse_sim(j.at("sim"), cfg);
  if (j.contains("trajectory")) cfg.trajectory = j.at("trajectory");
  return cfg;
}

int line_of(const std::string& text, std::size_t byte) {
  const auto upto = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n'));
}

}  // namespace

std::vector<double> stability_masses(double m0) { return {m0, 2.0 * m0, 10.0 * m0, kInf}; }

Trajectory RobotConfig::reference() const {
  if (trajectory.is_null()) return Trajectory::hold(home);
  return parse_trajectory_json(trajectory, manifold(), home);
}

Pose RobotConfig::start_pose(const Trajectory& traj) const {
  return initial_pose ? *initial_pose : traj.start();
}

void validate_config(const RobotConfig& cfg, const LoadOptions& options) {
  const RobotModel& model = cfg.model;
  const int d = model.dim();
  const int n = model.actuator_count();

  if (!(model.inertial.body_mass > 0.0)) throw ValidationError("body", "mass must be positive");
  if (cfg.manifold() == Manifold::kRigid) {
    const Eigen::Matrix3d& I = model.inertial.inertia;
    if (!I.isApprox(I.transpose(), 1e-12) ||
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(I).eigenvalues().minCoeff() <= 0.0) {
      throw ValidationError("body", "inertia must be symmetric positive definite");
    }
  }

  if (!(model.m0 > 0.0)) throw ValidationError("actuator", "m0 must be positive");
  if (!(model.actuator_inertia >= 0.0)) throw ValidationError("actuator", "inertia must be non-negative");
  if (!(model.k0() >= 0.0)) throw ValidationError("actuator", "k0 must be non-negative");
  for (std::size_t i = 1; i < model.actuator.k.size(); ++i) {
    if (model.actuator.k[i] != 0.0) {
      throw ValidationError("actuator", "higher_k terms are not supported by the plant simulator");
    }
  }
  for (double c : model.actuator.c_tilde) {
    if (c != 0.0) throw ValidationError("actuator", "c_tilde terms are not supported by the plant simulator");
  }

  if (cfg.constraints.size() != n) throw ValidationError("constraints", "one entry per actuator required");
  cfg.constraints.validate();

  try {
    cfg.gains.validate();
  } catch (const DimensionMismatch& e) {
    throw ValidationError("gains", e.what());
  }
  if (cfg.gains.k0 != model.k0() || cfg.gains.m0 != model.m0) {
    throw ValidationError("gains", "controller k0/m0 differ from the actuator parameters");
  }
  if (options.check_stability) {
    StabilityReport report;
    try {
      report = stability_check(cfg.gains, model.actuator, stability_masses(model.m0));
    } catch (const Error& e) {
      throw ValidationError("stability", e.what());
    }
    if (!report.passed) {
      for (const auto& e : report.entries) {
        if (!e.stable) {
          std::ostringstream msg;
          msg << "closed loop unstable for load mass " << e.mass << " (max real part "
              << e.max_real_part << ")";
          throw ValidationError("stability", msg.str());
        }
      }
    }
  }

  cfg.sim.validate();
  if (cfg.sim.disturbance.size() != 0 && cfg.sim.disturbance.size() != d) {
    throw ValidationError("sim", "disturbance needs " + std::to_string(d) + " components");
  }

  Eigen::MatrixXd L;
  try {
    inverse_kinematics(model.geometry, cfg.home);
    L = jacobian(model.geometry, cfg.home);
  } catch (const DegenerateGeometry& e) {
    throw ValidationError("degenerate", e.what());
  }
  if (n < d) {
    throw ValidationError("rank", std::to_string(n) + " actuators cannot control " +
                                      std::to_string(d) + " degrees of freedom");
  }
  const double smin = Eigen::JacobiSVD<Eigen::MatrixXd>(L).singularValues().minCoeff();
  if (!(smin > 1e-8)) throw ValidationError("rank", "Jacobian is singular at the home pose");

  const Eigen::MatrixXd M = mass_matrix(model, cfg.home);
  const Eigen::MatrixXd gap = M - model.m0 * L.transpose() * L;
  const double emin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gap).eigenvalues().minCoeff();
  if (emin < -1e-9) {
    std::ostringstream msg;
    msg << "M - m0 J^T J is indefinite at the home pose (min eigenvalue " << emin << ")";
    throw ValidationError("psd", msg.str());
  }

  const int pdim = cfg.manifold() == Manifold::kRigid ? 3 : d;
  if (cfg.workspace_lower.size() != cfg.workspace_upper.size() ||
      (cfg.workspace_lower.size() != 0 && cfg.workspace_lower.size() != pdim)) {
    throw ValidationError("workspace", "lower and upper need " + std::to_string(pdim) + " entries");
  }
  if ((cfg.workspace_lower.array() > cfg.workspace_upper.array()).any()) {
    throw ValidationError("workspace", "lower exceeds upper");
  }

  try {
    const Trajectory traj = cfg.reference();
    inverse_kinematics(model.geometry, cfg.start_pose(traj));
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError("trajectory", e.what());
  }
}

RobotConfig parse_config(const std::string& text, const LoadOptions& options) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), line_of(text, e.byte));
  }
  RobotConfig cfg;
  try {
    cfg = from_json(j);
  } catch (const json::exception& e) {
    schema(e.what());
  }
  validate_config(cfg, options);
  return cfg;
}

RobotConfig load_config(const std::string& path, const LoadOptions& options) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str(), options);
}

nlohmann::json to_json(const RobotConfig& cfg) {
  const RobotModel& model = cfg.model;
  const Manifold m = cfg.manifold();
  const int pd = m == Manifold::kRigid ? 3 : tangent_dim(m);
  json j;
  j["manifold"] = manifold_name(m);
  json acts = json::array();
  for (int k = 0; k < model.actuator_count(); ++k) {
    acts.push_back({{"anchor", to_array(Eigen::VectorXd(model.geometry.anchors[k].head(pd)))},
                    {"attachment", to_array(Eigen::VectorXd(model.geometry.attachments[k].head(pd)))}});
  }
  j["actuators"] = acts;
  j["body"] = {{"mass", model.inertial.body_mass},
               {"inertia", to_array(Eigen::MatrixXd(model.inertial.inertia))},
               {"gravity", to_array(Eigen::VectorXd(model.inertial.gravity.head(pd)))}};
  json ap = {{"m0", model.m0}, {"k0", model.k0()}, {"inertia", model.actuator_inertia}};
  if (!model.actuator.c.empty()) ap["c"] = model.actuator.c;
  if (model.actuator.k.size() > 1) ap["higher_k"] = std::vector<double>(model.actuator.k.begin() + 1, model.actuator.k.end());
  if (!model.actuator.c_tilde.empty()) ap["c_tilde"] = model.actuator.c_tilde;
  j["actuator_params"] = ap;
  j["constraints"] = {{"t_min", to_array(cfg.constraints.t_min)},
                      {"f_cmd_max", limit_to_json(cfg.constraints.f_cmd_max)}};
  if (cfg.controller_type == "pd") {
    j["controller"] = {{"type", "pd"}, {"kp", cfg.kp}, {"kd", cfg.kd}};
  } else {
    j["controller"] = {{"type", "statespace"},
                       {"A", to_array(cfg.gains.A)},
                       {"B", to_array(cfg.gains.B)},
                       {"C", to_array(Eigen::VectorXd(cfg.gains.C.transpose()))},
                       {"D", to_array(Eigen::VectorXd(cfg.gains.D.transpose()))},
                       {"l", cfg.gains.derivative_order()}};
  }
  j["home_pose"] = to_array(cfg.home.to_vector());
  if (cfg.workspace_lower.size() > 0) {
    j["workspace"] = {{"lower", to_array(cfg.workspace_lower)}, {"upper", to_array(cfg.workspace_upper)}};
  }
  json sim = {{"dt_control", cfg.sim.dt_control},
              {"dt_physics", cfg.sim.dt_physics},
              {"duration", cfg.sim.duration},
              {"noise_sigma", cfg.sim.noise_sigma},
              {"seed", cfg.sim.seed},
              {"evaluate_at", cfg.sim.controller.evaluate_at == EvaluationPoint::kMeasured
                                  ? "measured"
                                  : "reference"}};
  if (cfg.sim.disturbance.size() > 0) sim["disturbance"] = to_array(cfg.sim.disturbance);
  if (cfg.initial_pose) sim["initial_pose"] = to_array(cfg.initial_pose->to_vector());
  j["sim"] = sim;
  if (!cfg.trajectory.is_null()) j["trajectory"] = cfg.trajectory;
  return j;
}

std::string serialize_config(const RobotConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

}  // namespace pac
