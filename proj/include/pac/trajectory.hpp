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

#include <string>
#include <vector>

#include <json.hpp>

#include "pac/manifold.hpp"
#include "pac/system_controller.hpp"

namespace pac {

struct Segment {
  enum class Kind { kHold, kLine, kQuintic };
  Kind kind = Kind::kHold;
  Pose target;  // ignored for holds
  double duration = 0.0;
};

struct TrajectorySample {
  double t = 0.0;
  Pose pose;
  Tangent velocity;
  Tangent accel;
};

// Reference stream: either parametric segments evaluated analytically or
// tabulated samples interpolated linearly (pose along the pose difference).
// Holds the final pose after the end.
class Trajectory {
 public:
  static Trajectory hold(const Pose& pose);
  static Trajectory from_segments(const Pose& start, std::vector<Segment> segments);
  // Samples must have strictly increasing times; derivative columns are
  // checked against finite differences of the poses. Throws ValidationError.
  static Trajectory from_samples(std::vector<TrajectorySample> samples);

  ReferenceSample sample(double t) const;
  Pose start() const;
  double duration() const;
  Manifold manifold() const { return start().manifold(); }

 private:
  bool tabulated_ = false;
  Pose start_;
  std::vector<Segment> segments_;
  std::vector<TrajectorySample> samples_;
};

// {"start": [...], "segments": [{"type": "hold"|"line"|"quintic", "to": [...],
// "duration": s}, ...]}; "start" defaults to `start`.
Trajectory parse_trajectory_json(const nlohmann::json& j, Manifold m, const Pose& start);

// CSV header: t, pose columns (d, or x y z qw qx qy qz), then optionally d
// velocity and d acceleration columns. Missing derivatives are filled by
// finite differences.
Trajectory parse_trajectory_csv(const std::string& text, Manifold m);

// Dispatches on the file extension (.json or .csv).
Trajectory load_trajectory(const std::string& path, Manifold m, const Pose& start);

}  // namespace pac
