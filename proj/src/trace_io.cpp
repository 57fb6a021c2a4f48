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

#include "pac/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "pac/errors.hpp"

namespace pac {

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  out += ',';
  out += buf;
}

void append_block(std::string& out, const Eigen::VectorXd& v, int expected) {
  for (int i = 0; i < expected; ++i) {
    append_number(out, i < v.size() ? v(i) : std::numeric_limits<double>::quiet_NaN());
  }
}

void append_names(std::string& out, const char* prefix, int count) {
  for (int i = 1; i <= count; ++i) out += std::string(",") + prefix + std::to_string(i);
}

int count_prefix(const std::vector<std::string>& cols, const std::string& prefix) {
  int n = 0;
  for (const auto& c : cols) {
    if (c.rfind(prefix, 0) == 0) ++n;
  }
  return n;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string trace_header(int dim, int actuators) {
  std::string h = "t";
  append_names(h, "eta_", dim);
  append_names(h, "etar_", dim);
  append_names(h, "thetad_", dim);
  append_names(h, "mode_", dim);
  append_names(h, "fc_", actuators);
  append_names(h, "tension_", actuators);
  h += ",brake\n";
  return h;
}

std::string format_trace(const TraceLog& trace) {
  std::string out = trace_header(trace.dim, trace.actuators);
  for (const TraceRow& r : trace.rows) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", r.t);
    out += buf;
    append_block(out, r.eta, trace.dim);
    append_block(out, r.eta_ref, trace.dim);
    append_block(out, r.theta_d, trace.dim);
    append_block(out, r.modes, trace.dim);
    append_block(out, r.f_c, trace.actuators);
    append_block(out, r.tensions, trace.actuators);
    out += r.brake ? ",1\n" : ",0\n";
  }
  return out;
}

void write_trace(const TraceLog& trace, std::ostream& out) {
  out << format_trace(trace);
  if (!out) throw Error("failed to write trace");
}

void write_trace(const TraceLog& trace, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  write_trace(trace, f);
}

TraceLog parse_trace(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing trace header", 1);
  const auto header = split(line);
  TraceLog trace;
  trace.dim = count_prefix(header, "eta_");
  trace.actuators = count_prefix(header, "fc_");
  const std::size_t cols = 2 + 4 * static_cast<std::size_t>(trace.dim) +
                           2 * static_cast<std::size_t>(trace.actuators);
  std::string expected = trace_header(trace.dim, trace.actuators);
  expected.pop_back();
  if (header.size() != cols || header != split(expected)) {
    throw ParseError("unexpected trace header", 1);
  }
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != cols) throw ParseError("wrong number of columns", line_no);
    std::vector<double> v(cols);
    for (std::size_t i = 0; i < cols; ++i) {
      char* end = nullptr;
      v[i] = std::strtod(cells[i].c_str(), &end);
      if (end == cells[i].c_str() || *end != '\0') throw ParseError("bad number '" + cells[i] + "'", line_no);
    }
    const auto block = [&](std::size_t start, int len) {
      return Eigen::Map<const Eigen::VectorXd>(v.data() + start, len).eval();
    };
    TraceRow r;
    const int d = trace.dim;
    const int n = trace.actuators;
    r.t = v[0];
    r.eta = block(1, d);
    r.eta_ref = block(1 + d, d);
    r.theta_d = block(1 + 2 * d, d);
    r.modes = block(1 + 3 * d, d);
    r.f_c = block(1 + 4 * d, n);
    r.tensions = block(1 + 4 * d + n, n);
    r.brake = v[cols - 1] != 0.0;
    trace.rows.push_back(std::move(r));
  }
  return trace;
}

TraceLog read_trace(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open trace '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_trace(buf.str());
}

}  // namespace pac
