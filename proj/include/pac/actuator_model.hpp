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

#include <vector>

namespace pac {

// Coefficients of the linear single-actuator law
//
//   f + c_2 f' + ... + c_n f^(n-1) + k_0 l' + k_1 l'' + ... + k_n l^(n+1)
//     = f_c + ct_2 f_c' + ... + ct_p f_c^(p-1)
//
// relating command force f_c, actual force f and actuator value l.
// Vectors are stored from their first index: c[0] is c_2, k[0] is k_0 and
// c_tilde[0] is ct_2.
struct ActuatorModel {
  std::vector<double> c;
  std::vector<double> k{0.0};
  std::vector<double> c_tilde;

  static ActuatorModel ideal(double k0) { return ActuatorModel{{}, {k0}, {}}; }

  double k0() const { return k.empty() ? 0.0 : k[0]; }

  bool is_ideal() const {
    for (double v : c) if (v != 0.0) return false;
    for (double v : c_tilde) if (v != 0.0) return false;
    for (std::size_t i = 1; i < k.size(); ++i) if (k[i] != 0.0) return false;
    return true;
  }
};

}  // namespace pac
