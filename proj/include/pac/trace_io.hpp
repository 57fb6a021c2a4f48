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

#include <iosfwd>
#include <string>

#include "pac/plant_simulator.hpp"

namespace pac {

std::string trace_header(int dim, int actuators);

// CSV, one row per control tick, numbers with 9 significant digits. Brake
// rows carry NaN command and tension columns.
std::string format_trace(const TraceLog& trace);
void write_trace(const TraceLog& trace, std::ostream& out);
void write_trace(const TraceLog& trace, const std::string& path);

// Inverse of format_trace up to the printed precision. Throws ParseError.
TraceLog parse_trace(const std::string& text);
TraceLog read_trace(const std::string& path);

}  // namespace pac
