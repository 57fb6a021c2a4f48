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

#include "pac/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pac/errors.hpp"

namespace pac {

namespace {

struct Profile {
  double s, ds, dds;
};

Profile profile(Segment::Kind kind, double tau, double T) {
  tau = std::clamp(tau, 0.0, 1.0);
  switch (kind) {
    case Segment::Kind::kHold:
      return {0.0, 0.0, 0.0};
    case Segment::Kind::kLine:
      return {tau, 1.0 / T, 0.0};
    case Segment::Kind::kQuintic: {
      const double t2 = tau * tau, t3 = t2 * tau;
      return {t3 * (10.0 - 15.0 * tau + 6.0 * t2), 30.0 * t2 * (1.0 - 2.0 * tau + t2) / T,
              60.0 * tau * (1.0 - 3.0 * tau + 2.0 * t2) / (T * T)};
    }
  }
  return {0.0, 0.0, 0.0};
}

Eigen::VectorXd json_vector(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> split_numbers(const std::string& line, bool& numeric) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  numeric = true;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (cell.find_first_not_of(" \t\r", used) != std::string::npos) numeric = false;
    } catch (const std::exception&) {
      numeric = false;
    }
  }
  return out;
}

}  // namespace

Trajectory Trajectory::hold(const Pose& pose) { return from_segments(pose, {}); }

Trajectory Trajectory::from_segments(const Pose& start, std::vector<Segment> segments) {
  for (const Segment& s : segments) {
    if (!(s.duration > 0.0)) throw ValidationError("trajectory", "segment duration must be positive");
    if (s.kind != Segment::Kind::kHold && s.target.manifold() != start.manifold()) {
      throw ValidationError("trajectory", "segment target on a different manifold");
    }
  }
  Trajectory t;
  t.start_ = start;
  t.segments_ = std::move(segments);
  return t;
}

Trajectory Trajectory::from_samples(std::vector<TrajectorySample> samples) {
  if (samples.empty()) throw ValidationError("trajectory", "no samples");
  const int d = samples.front().pose.dim();
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].t > samples[i - 1].t)) {
      throw ValidationError("trajectory", "sample times must be strictly increasing");
    }
  }
  for (const auto& s : samples) {
    if (s.velocity.size() != d || s.accel.size() != d) {
      throw ValidationError("trajectory", "derivative columns have the wrong dimension");
    }
  }
  // Derivative columns must agree with differenced positions.
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const double span = samples[i + 1].t - samples[i - 1].t;
    const Tangent fd_v = pose_difference(samples[i - 1].pose, samples[i + 1].pose) / span;
    const Tangent fd_a = (samples[i + 1].velocity - samples[i - 1].velocity) / span;
    const double tol_v = 1e-3 * (1.0 + samples[i].velocity.lpNorm<Eigen::Infinity>());
    const double tol_a = 1e-3 * (1.0 + samples[i].accel.lpNorm<Eigen::Infinity>());
    if ((fd_v - samples[i].velocity).lpNorm<Eigen::Infinity>() > tol_v) {
      throw ValidationError("trajectory", "velocity column inconsistent with positions at t = " +
                                              std::to_string(samples[i].t));
    }
    if ((fd_a - samples[i].accel).lpNorm<Eigen::Infinity>() > tol_a) {
      throw ValidationError("trajectory",
                            "acceleration column inconsistent with velocities at t = " +
                                std::to_string(samples[i].t));
    }
  }
  Trajectory t;
  t.tabulated_ = true;
  t.start_ = samples.front().pose;
  t.samples_ = std::move(samples);
  return t;
}

Pose Trajectory::start() const { return start_; }

double Trajectory::duration() const {
  if (tabulated_) return samples_.back().t;
  double total = 0.0;
  for (const Segment& s : segments_) total += s.duration;
  return total;
}

ReferenceSample Trajectory::sample(double t) const {
  const int d = start_.dim();
  if (tabulated_) {
    if (t <= samples_.front().t) {
      const auto& s = samples_.front();
      return {s.pose, s.velocity, s.accel, t};
    }
    if (t >= samples_.back().t) {
      const auto& s = samples_.back();
      return {s.pose, s.velocity, s.accel, t};
    }
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                                     [](double v, const TrajectorySample& s) { return v < s.t; });
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double w = (t - a.t) / (b.t - a.t);
    return {retract(a.pose, w * pose_difference(a.pose, b.pose)),
            (1.0 - w) * a.velocity + w * b.velocity, (1.0 - w) * a.accel + w * b.accel, t};
  }

  Pose from = start_;
  double t0 = 0.0;
  for (const Segment& seg : segments_) {
    const Pose to = seg.kind == Segment::Kind::kHold ? from : seg.target;
    if (t < t0 + seg.duration) {
      const Tangent delta = pose_difference(from, to);
      const Profile p = profile(seg.kind, (t - t0) / seg.duration, seg.duration);
      return {retract(from, p.s * delta), p.ds * delta, p.dds * delta, t};
    }
    from = to;
    t0 += seg.duration;
  }
  return {from, Tangent::Zero(d), Tangent::Zero(d), t};
}

Trajectory parse_trajectory_json(const nlohmann::json& j, Manifold m, const Pose& start) {
  try {
    const Pose from = j.contains("start") ? Pose::from_vector(m, json_vector(j.at("start"))) : start;
    std::vector<Segment> segments;
    for (const auto& s : j.value("segments", nlohmann::json::array())) {
      Segment seg;
      const auto type = s.at("type").get<std::string>();
      if (type == "hold") {
        seg.kind = Segment::Kind::kHold;
      } else if (type == "line") {
        seg.kind = Segment::Kind::kLine;
      } else if (type == "quintic") {
        seg.kind = Segment::Kind::kQuintic;
      } else {
        throw ValidationError("trajectory", "unknown segment type '" + type + "'");
      }
      seg.duration = s.at("duration").get<double>();
      seg.target = seg.kind == Segment::Kind::kHold ? from : Pose::from_vector(m, json_vector(s.at("to")));
      segments.push_back(seg);
    }
    return Trajectory::from_segments(from, std::move(segments));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("trajectory", e.what());
  } catch (const DimensionMismatch& e) {
    throw ValidationError("trajectory", e.what());
  }
}

Trajectory parse_trajectory_csv(const std::string& text, Manifold m) {
  const int c = coordinate_count(m);
  const int d = tangent_dim(m);
  std::vector<std::vector<double>> rows;
  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    bool numeric = false;
    auto values = split_numbers(line, numeric);
    if (!numeric) {
      if (rows.empty()) continue;  // header
      throw ParseError("non-numeric trajectory row", line_no);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ValidationError("trajectory", "no samples");
  const auto cols = rows.front().size();
  const bool has_vel = cols >= static_cast<std::size_t>(1 + c + d);
  const bool has_acc = cols == static_cast<std::size_t>(1 + c + 2 * d);
  if (cols != static_cast<std::size_t>(1 + c) && cols != static_cast<std::size_t>(1 + c + d) && !has_acc) {
    throw ValidationError("trajectory", "expected " + std::to_string(1 + c) + ", " +
                                            std::to_string(1 + c + d) + " or " +
                                            std::to_string(1 + c + 2 * d) + " columns");
  }

  std::vector<TrajectorySample> samples;
  for (const auto& r : rows) {
    if (r.size() != cols) throw ValidationError("trajectory", "ragged CSV rows");
    const Eigen::Map<const Eigen::VectorXd> v(r.data(), static_cast<Eigen::Index>(r.size()));
    TrajectorySample s;
    s.t = v(0);
    s.pose = Pose::from_vector(m, v.segment(1, c));
    s.velocity = has_vel ? Tangent(v.segment(1 + c, d)) : Tangent::Zero(d);
    s.accel = has_acc ? Tangent(v.segment(1 + c + d, d)) : Tangent::Zero(d);
    samples.push_back(std::move(s));
  }
  const std::size_t n = samples.size();
  auto diff = [&](std::size_t i, auto&& get) -> Tangent {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == n ? i : i + 1;
    if (a == b) return Tangent::Zero(d);
    return get(a, b) / (samples[b].t - samples[a].t);
  };
  if (!has_vel) {
    std::vector<Tangent> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = diff(i, [&](std::size_t a, std::size_t b) {
        return pose_difference(samples[a].pose, samples[b].pose);
      });
    }
    for (std::size_t i = 0; i < n; ++i) samples[i].velocity = v[i];
  }
  if (!has_acc) {
    std::vector<Tangent> acc(n);
    for (std::size_t i = 0; i < n; ++i) {
      acc[i] = diff(i, [&](std::size_t a, std::size_t b) -> Tangent {
        return samples[b].velocity - samples[a].velocity;
      });
    }
    for (std::size_t i = 0; i < n; ++i) samples[i].accel = acc[i];
  }
  return Trajectory::from_samples(std::move(samples));
}

Trajectory load_trajectory(const std::string& path, Manifold m, const Pose& start) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open trajectory file '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  const auto ends_with = [&](const std::string& ext) {
    return path.size() >= ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0;
  };
  if (ends_with(".csv")) return parse_trajectory_csv(text, m);
  if (ends_with(".json")) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      const auto upto = std::min<std::size_t>(e.byte, text.size());
      const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + upto, '\n'));
      throw ParseError(e.what(), line);
    }
    return parse_trajectory_json(j, m, start);
  }
  throw Error("trajectory file must end in .json or .csv: '" + path + "'");
}

}  // namespace pac
