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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "pac/cli.hpp"
#include "pac/config.hpp"
#include "pac/errors.hpp"
#include "pac/trace_io.hpp"
#include "pac/trajectory.hpp"
#include "test_fixtures.hpp"

namespace pac {
namespace {

using nlohmann::json;
using testing::data_path;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json fixture() { return json::parse(slurp(data_path("fixture_p3.json"))); }

std::string invariant_of(const json& j) {
  try {
    parse_config(j.dump());
  } catch (const ValidationError& e) {
    return e.invariant();
  }
  return "";
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp_path(const std::string& name) { return ::testing::TempDir() + name; }

TEST(Config, LoadsFixture) {
  const auto cfg = load_config(data_path("fixture_p3.json"));
  EXPECT_EQ(cfg.model.geometry.actuator_count(), 3);
  EXPECT_EQ(cfg.controller_type, "pd");
  EXPECT_DOUBLE_EQ(cfg.model.m0, 0.1);
  EXPECT_DOUBLE_EQ(cfg.model.actuator_inertia, 0.1);
  EXPECT_DOUBLE_EQ(cfg.constraints.t_min(2), 0.5);
  EXPECT_EQ(cfg.sim.substeps(), 4);
  EXPECT_EQ(cfg.home.to_vector(), Eigen::Vector2d(2, 1));
}

TEST(Config, RoundTripIsStable) {
  for (const char* name : {"fixture_p3.json", "golden_p3.json"}) {
    const auto a = load_config(data_path(name));
    const std::string s1 = serialize_config(a);
    const auto b = parse_config(s1);
    EXPECT_EQ(serialize_config(b), s1) << name;
    EXPECT_EQ(b.initial_pose.has_value(), a.initial_pose.has_value());
  }
}

TEST(Config, RigidRoundTrip) {
  json j;
  j["manifold"] = "se3";
  const auto m = testing::rigid_model();
  for (std::size_t i = 0; i < m.geometry.anchors.size(); ++i) {
    const Eigen::Vector3d& a = m.geometry.anchors[i];
    const Eigen::Vector3d& b = m.geometry.attachments[i];
    json act;
    act["anchor"] = {a(0), a(1), a(2)};
    act["attachment"] = {b(0), b(1), b(2)};
    j["actuators"].push_back(act);
  }
  j["body"] = {{"mass", 2.0}, {"inertia", {{0.08, 0, 0}, {0, 0.1, 0}, {0, 0, 0.12}}}, {"gravity", {0, 0, -9.81}}};
  j["actuator_params"] = {{"m0", 0.05}, {"k0", 0.0}};
  j["constraints"] = {{"t_min", 1.0}, {"f_cmd_max", nullptr}};
  j["controller"] = {{"type", "pd"}, {"kp", 4}, {"kd", 4}};
  j["home_pose"] = {0, 0, 0, 1, 0, 0, 0};
  const auto cfg = parse_config(j.dump());
  EXPECT_TRUE(std::isinf(cfg.constraints.f_cmd_max(0)));
  const std::string s = serialize_config(cfg);
  EXPECT_EQ(serialize_config(parse_config(s)), s);
}

TEST(Config, ValidationKeys) {
  auto j = fixture();
  j["bogus"] = 1;
  EXPECT_EQ(invariant_of(j), "schema");

  j = fixture();
  j["actuators"] = json::array({{{"anchor", {0, 0}}}, {{"anchor", {4, 0}}}, {{"anchor", {8, 0}}}});
  j["home_pose"] = {2, 0};
  j.erase("workspace");
  EXPECT_EQ(invariant_of(j), "rank");

  j = fixture();
  j["actuators"].erase(2);
  j["actuators"].erase(1);
  j["constraints"]["t_min"] = 0.0;
  EXPECT_EQ(invariant_of(j), "rank");

  j = fixture();
  j["actuator_params"] = {{"m0", 50.0}, {"k0", 0.0}, {"inertia", 0.1}};
  EXPECT_EQ(invariant_of(j), "psd");

  j = fixture();
  j["body"]["mass"] = -1.0;
  EXPECT_EQ(invariant_of(j), "body");

  j = fixture();
  j["controller"]["kp"] = -1.0;
  EXPECT_EQ(invariant_of(j), "gains");

  j = fixture();
  j["actuator_params"]["higher_k"] = {0.2};
  EXPECT_EQ(invariant_of(j), "actuator");

  j = fixture();
  j["sim"]["dt_physics"] = 0.0003;
  EXPECT_EQ(invariant_of(j), "sim");

  j = fixture();
  j["workspace"]["lower"] = {4, 4};
  EXPECT_EQ(invariant_of(j), "workspace");

  j = fixture();
  j["constraints"]["t_min"] = {0.5, 0.5};
  EXPECT_EQ(invariant_of(j), "constraints");

  j = fixture();
  j["controller"] = {{"type", "statespace"}, {"A", {{0.5}}}, {"B", {1.0}}, {"C", {1.0}}, {"D", {4.0, 4.0}}, {"l", 2}};
  EXPECT_EQ(invariant_of(j), "stability");
}

TEST(Config, ParseErrorsCarryLine) {
  try {
    parse_config("{\n  \"manifold\": \"euclidean2\",\n  \"actuators\": [,\n}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Config, StabilityCheckCanBeSkipped) {
  auto j = fixture();
  j["controller"] = {{"type", "statespace"}, {"A", {{0.5}}}, {"B", {1.0}}, {"C", {1.0}}, {"D", {4.0, 4.0}}, {"l", 2}};
  EXPECT_NO_THROW(parse_config(j.dump(), LoadOptions{false}));
}

TraceLog small_trace() {
  TraceLog tr;
  tr.dim = 2;
  tr.actuators = 3;
  for (int k = 0; k < 3; ++k) {
    TraceRow r;
    r.t = 0.001 * k;
    r.eta = Eigen::Vector2d(2.0 + 1e-3 * k, 1.0 / 3.0);
    r.eta_ref = Eigen::Vector2d(2, 1);
    r.theta_d = r.eta_ref - r.eta;
    r.modes = Eigen::Vector2d(-0.125, 7e-10);
    r.f_c = Eigen::Vector3d(-0.5, -1.25, -10.2572136);
    r.tensions = Eigen::Vector3d(0.5, 1.25, 10.2572136);
    r.brake = k == 2;
    if (r.brake) r.f_c.setConstant(std::nan(""));
    tr.rows.push_back(r);
  }
  return tr;
}

TEST(TraceIo, HeaderLayout) {
  EXPECT_EQ(trace_header(2, 3),
            "t,eta_1,eta_2,etar_1,etar_2,thetad_1,thetad_2,mode_1,mode_2,fc_1,fc_2,fc_3,"
            "tension_1,tension_2,tension_3,brake\n");
}

TEST(TraceIo, RoundTrip) {
  const auto a = small_trace();
  const std::string text = format_trace(a);
  const auto b = parse_trace(text);
  ASSERT_EQ(b.rows.size(), 3u);
  EXPECT_EQ(b.dim, 2);
  EXPECT_EQ(b.actuators, 3);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_LE((a.rows[k].eta - b.rows[k].eta).norm(), 1e-9);
    EXPECT_EQ(a.rows[k].brake, b.rows[k].brake);
  }
  EXPECT_TRUE(std::isnan(b.rows[2].f_c(1)));
  EXPECT_EQ(format_trace(b), text);
  const std::string path = tmp_path("pac_trace_rt.csv");
  write_trace(a, path);
  EXPECT_EQ(slurp(path), text);
  EXPECT_EQ(format_trace(read_trace(path)), text);
}

TEST(TraceIo, EmptyTraceIsHeaderOnly) {
  TraceLog tr;
  tr.dim = 2;
  tr.actuators = 3;
  const std::string text = format_trace(tr);
  EXPECT_EQ(text, trace_header(2, 3));
  EXPECT_TRUE(parse_trace(text).rows.empty());
}

TEST(TraceIo, MalformedInput) {
  EXPECT_THROW(parse_trace(""), ParseError);
  EXPECT_THROW(parse_trace("t,x\n"), ParseError);
  const std::string head = trace_header(1, 1);
  try {
    parse_trace(head + "0,1,1,0,0,1,1,0\n0,1,1,0,zz,1,1,0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Trajectory, QuinticSegment) {
  const Pose a = Pose::euclidean(Eigen::Vector2d(2, 1));
  const Pose b = Pose::euclidean(Eigen::Vector2d(2.2, 1.3));
  const auto tr = Trajectory::from_segments(a, {{Segment::Kind::kHold, a, 0.1}, {Segment::Kind::kQuintic, b, 0.5}});
  EXPECT_DOUBLE_EQ(tr.duration(), 0.6);
  EXPECT_EQ(tr.sample(0.05).pose.to_vector(), a.to_vector());
  EXPECT_LE((tr.sample(0.35).pose.to_vector() - Eigen::Vector2d(2.1, 1.15)).norm(), 1e-12);
  // Peak speed of the quintic is 15/8 of the mean.
  EXPECT_LE((tr.sample(0.35).velocity - Eigen::Vector2d(0.2, 0.3) / 0.5 * 1.875).norm(), 1e-12);
  EXPECT_LE(tr.sample(0.6).velocity.norm(), 1e-12);
  EXPECT_EQ(tr.sample(5.0).pose.to_vector(), b.to_vector());
  const double h = 1e-6;
  const Tangent v = (tr.sample(0.3 + h).velocity - tr.sample(0.3 - h).velocity) / (2 * h);
  EXPECT_LE((v - tr.sample(0.3).accel).norm(), 1e-5);
}

TEST(Trajectory, RigidLineRetractsFromStart) {
  const Pose a = Pose::rigid(Eigen::Vector3d(0, 0, 0), Eigen::Quaterniond::Identity());
  Tangent delta(6);
  delta << 0.1, 0, 0, 0, 0, 0.4;
  const Pose b = retract(a, delta);
  const auto tr = Trajectory::from_segments(a, {{Segment::Kind::kLine, b, 2.0}});
  EXPECT_LE((tr.sample(1.0).velocity - delta / 2).norm(), 1e-12);
  EXPECT_LE(pose_difference(tr.sample(2.0).pose, b).norm(), 1e-12);
}

TEST(Trajectory, JsonAndCsv) {
  const Pose home = Pose::euclidean(Eigen::Vector2d(2, 1));
  const auto tj = load_trajectory(data_path("out_of_workspace.json"), Manifold::kEuclidean2, home);
  EXPECT_DOUBLE_EQ(tj.duration(), 1.1);
  EXPECT_LE((tj.sample(0.6).pose.to_vector() - Eigen::Vector2d(2, 10.5)).norm(), 1e-12);

  std::string csv = "t,x,y\n";
  for (int k = 0; k <= 100; ++k) {
    const double t = 0.01 * k;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t, 2 + 0.1 * std::sin(t), 1.0);
    csv += buf;
  }
  const auto tc = parse_trajectory_csv(csv, Manifold::kEuclidean2);
  EXPECT_NEAR(tc.sample(0.505).pose.to_vector()(0), 2 + 0.1 * std::sin(0.505), 1e-5);
  EXPECT_NEAR(tc.sample(0.5).velocity(0), 0.1 * std::cos(0.5), 1e-4);
  EXPECT_THROW(parse_trajectory_csv("t,x,y\n0,1,1\n0,1,2\n", Manifold::kEuclidean2), ValidationError);
  EXPECT_THROW(parse_trajectory_csv("0,1,1\n0.1,1,1,7\n", Manifold::kEuclidean2), ValidationError);
  EXPECT_THROW(parse_trajectory_csv("t,x,y\n0,1,1\n0.1,abc,1\n", Manifold::kEuclidean2), ParseError);
  // velocity column inconsistent with the poses
  EXPECT_THROW(parse_trajectory_csv("0,1,1,5,0\n0.1,1,1,5,0\n0.2,1,1,5,0\n", Manifold::kEuclidean2),
               ValidationError);
}

TEST(Cli, Validate) {
  const auto r = cli({"validate", "--config", data_path("fixture_p3.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("ok"), std::string::npos);
  auto j = fixture();
  j["actuator_params"] = {{"m0", 50.0}, {"k0", 0.0}, {"inertia", 0.1}};
  const std::string bad = tmp_path("pac_bad.json");
  std::ofstream(bad) << j.dump();
  const auto rb = cli({"validate", "--config", bad});
  EXPECT_EQ(rb.code, kExitError);
  EXPECT_NE(rb.err.find("psd"), std::string::npos);
  EXPECT_EQ(cli({"validate"}).code, kExitError);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitError);
}

TEST(Cli, AnalyzeReportsModalMasses) {
  const auto r = cli({"analyze", "--config", data_path("fixture_p3.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("0.725"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("0.8142857"), std::string::npos) << r.out;
  EXPECT_EQ(cli({"analyze", "--config", data_path("fixture_p3.json"), "--pose", "2,1,3"}).code, kExitError);
}

TEST(Cli, SimulateMatchesGoldenTrace) {
  const std::string out = tmp_path("pac_golden.csv");
  const auto r = cli({"simulate", "--config", data_path("golden_p3.json"), "--out", out});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(slurp(out), slurp(data_path("golden_p3_trace.csv")));
}

TEST(Cli, SimulateOutOfWorkspaceBrakes) {
  const std::string out = tmp_path("pac_brake.csv");
  const auto r = cli({"simulate", "--config", data_path("fixture_p3.json"), "--trajectory",
                      data_path("out_of_workspace.json"), "--out", out});
  EXPECT_EQ(r.code, kExitBrake);
  EXPECT_NE(r.err.find("out of workspace"), std::string::npos) << r.err;
  const auto trace = read_trace(out);
  ASSERT_FALSE(trace.rows.empty());
  EXPECT_TRUE(trace.rows.back().brake);
  for (std::size_t k = 0; k + 1 < trace.rows.size(); ++k) EXPECT_FALSE(trace.rows[k].brake);
}

TEST(Cli, WorkspaceGrid) {
  const std::string out = tmp_path("pac_ws.csv");
  const auto r = cli({"workspace", "--config", data_path("fixture_p3.json"), "--grid", "5,5", "--out", out});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,feasible,min_tension");
  int rows = 0, feasible = 0;
  while (std::getline(in, line)) {
    ++rows;
    double x, y, tmin;
    int f;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%d,%lf", &x, &y, &f, &tmin), 4) << line;
    feasible += f;
    if (std::abs(x - 2) < 1e-12 && std::abs(y - 1.5) < 1e-12) EXPECT_EQ(f, 1);
  }
  EXPECT_EQ(rows, 25);
  EXPECT_GT(feasible, 0);
}

TEST(Cli, TuneCheck) {
  EXPECT_EQ(cli({"tune-check", "--config", data_path("fixture_p3.json")}).code, kExitOk);
}

#ifdef PAC_CLI_PATH
TEST(Cli, BinaryExitCodes) {
  const std::string bin = PAC_CLI_PATH;
  const auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  EXPECT_EQ(status("validate --config " + data_path("fixture_p3.json")), kExitOk);
  EXPECT_EQ(status("simulate --config " + data_path("fixture_p3.json") + " --trajectory " +
                   data_path("out_of_workspace.json") + " --out " + tmp_path("pac_bin.csv")),
            kExitBrake);
}
#endif

}  // namespace
}  // namespace pac
