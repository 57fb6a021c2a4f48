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

#include "pac/force_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pac/errors.hpp"

namespace pac {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Inequality constraint n^T f >= b with n = sign * e_k.
struct Bound {
  int actuator;
  double sign;
  double b;
};

void check_sizes(const Eigen::MatrixXd& jac, const Cotangent& tau, const ActuatorVector& fb,
                 const ActuatorVector& f0, const ForceConstraints& con) {
  const auto n = jac.rows();
  if (tau.size() != jac.cols()) throw DimensionMismatch("wrench dimension does not match Jacobian");
  if (fb.size() != n || f0.size() != n || con.size() != n) {
    throw DimensionMismatch("actuator vectors must have " + std::to_string(n) + " entries");
  }
}

void check_rank(const Eigen::MatrixXd& jac) {
  const Eigen::VectorXd sv = jac.jacobiSvd().singularValues();
  const auto d = jac.cols();
  if (jac.rows() < d || !(sv(d - 1) > 1e-12 * std::max(sv(0), 1e-300))) {
    throw RankDeficient("force distribution needs a full column rank Jacobian");
  }
}

// Goldfarb-Idnani dual method specialised to the objective 1/2 |f|^2.
// Returns the active bound set on success.
std::optional<std::vector<Bound>> solve_active_set(const Eigen::MatrixXd& jac,
                                                   const Cotangent& tau, const ForceBounds& box) {
  const int n = static_cast<int>(jac.rows());
  const int d = static_cast<int>(jac.cols());

  std::vector<Bound> bounds;
  double scale = 1.0 + tau.lpNorm<Eigen::Infinity>();
  for (int k = 0; k < n; ++k) {
    if (std::isfinite(box.lo(k))) {
      bounds.push_back({k, 1.0, box.lo(k)});
      scale = std::max(scale, std::abs(box.lo(k)));
    }
    if (std::isfinite(box.hi(k))) {
      bounds.push_back({k, -1.0, -box.hi(k)});
      scale = std::max(scale, std::abs(box.hi(k)));
    }
  }
  const double tol = 1e-12 * scale;

  auto normal = [n](const Bound& c) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    v(c.actuator) = c.sign;
    return v;
  };
  auto slack = [](const Bound& c, const Eigen::VectorXd& x) { return c.sign * x(c.actuator) - c.b; };

  // Active set: the d equalities first, then bounds by index into `bounds`.
  std::vector<int> active;
  Eigen::MatrixXd N = jac;
  const Eigen::MatrixXd gram = jac.transpose() * jac;
  Eigen::VectorXd u = gram.ldlt().solve(tau);
  Eigen::VectorXd x = jac * u;

  auto drop = [&](int pos) {
    const int col = d + pos;
    const int cols = static_cast<int>(N.cols());
    N.block(0, col, n, cols - col - 1) = N.block(0, col + 1, n, cols - col - 1).eval();
    N.conservativeResize(Eigen::NoChange, cols - 1);
    u.segment(col, cols - col - 1) = u.segment(col + 1, cols - col - 1).eval();
    u.conservativeResize(cols - 1);
    active.erase(active.begin() + pos);
  };

  for (int iter = 0;; ++iter) {
    if (iter >= kMaxIterations) {
      throw NoConvergence("force distribution exceeded " + std::to_string(kMaxIterations) +
                          " active-set iterations");
    }
    int p = -1;
    double worst = -tol;
    for (int c = 0; c < static_cast<int>(bounds.size()); ++c) {
      if (std::find(active.begin(), active.end(), c) != active.end()) continue;
      const double s = slack(bounds[c], x);
      if (s < worst) {
        worst = s;
        p = c;
      }
    }
    if (p < 0) break;

    const Eigen::VectorXd np = normal(bounds[p]);
    double up = 0.0;
    for (int inner = 0;; ++inner) {
      if (inner >= kMaxIterations) {
        throw NoConvergence("force distribution: constraint could not be added");
      }
      const Eigen::MatrixXd G = N.transpose() * N;
      const Eigen::VectorXd r = G.ldlt().solve(N.transpose() * np);
      const Eigen::VectorXd z = np - N * r;

      double t1 = kInf;
      int drop_pos = -1;
      for (int j = 0; j < static_cast<int>(active.size()); ++j) {
        const double rj = r(d + j);
        if (rj > 1e-14) {
          const double ratio = u(d + j) / rj;
          if (ratio < t1 ||
              (ratio == t1 && bounds[active[j]].actuator < bounds[active[drop_pos]].actuator)) {
            t1 = ratio;
            drop_pos = j;
          }
        }
      }
      const double zz = z.squaredNorm();
      const double t2 = zz > 1e-20 ? -slack(bounds[p], x) / zz : kInf;
      const double t = std::min(t1, t2);
      if (!std::isfinite(t)) return std::nullopt;  // p is incompatible with the active set

      if (std::isfinite(t2)) x += t * z;
      u -= t * r;
      up += t;
      if (t2 <= t1) {
        N.conservativeResize(Eigen::NoChange, N.cols() + 1);
        N.col(N.cols() - 1) = np;
        u.conservativeResize(u.size() + 1);
        u(u.size() - 1) = up;
        active.push_back(p);
        break;
      }
      drop(drop_pos);
    }
  }

  std::vector<Bound> out;
  for (int c : active) out.push_back(bounds[c]);
  return out;
}

}  // namespace

ForceConstraints ForceConstraints::uniform(int n, double t_min, double f_cmd_max) {
  return {Eigen::VectorXd::Constant(n, t_min), Eigen::VectorXd::Constant(n, f_cmd_max)};
}

void ForceConstraints::validate() const {
  if (t_min.size() != f_cmd_max.size()) {
    throw ValidationError("constraints", "t_min and f_cmd_max lengths differ");
  }
  for (int k = 0; k < size(); ++k) {
    if (!(t_min(k) >= 0.0)) throw ValidationError("constraints", "t_min must be >= 0");
    if (!(f_cmd_max(k) > 0.0)) throw ValidationError("constraints", "f_cmd_max must be > 0");
  }
}

ForceBounds force_bounds(const ForceConstraints& con, const ActuatorVector& fb,
                         const ActuatorVector& f0) {
  ForceBounds box;
  box.lo = -con.f_cmd_max - fb;
  box.hi = (f0 - con.t_min).cwiseMin(con.f_cmd_max - fb);
  return box;
}

bool in_constraint_set(const ForceConstraints& con, const ActuatorVector& f,
                       const ActuatorVector& fb, const ActuatorVector& f0, double tol) {
  if (f.size() != con.size() || fb.size() != con.size() || f0.size() != con.size()) {
    throw DimensionMismatch("in_constraint_set: length mismatch");
  }
  for (int k = 0; k < con.size(); ++k) {
    if (f0(k) - f(k) < con.t_min(k) - tol) return false;
    if (std::abs(f(k) + fb(k)) > con.f_cmd_max(k) + tol) return false;
  }
  return true;
}

std::optional<ActuatorVector> distribute(const Eigen::MatrixXd& jac, const Cotangent& tau,
                                         const ActuatorVector& fb, const ActuatorVector& f0,
                                         const ForceConstraints& con) {
  check_sizes(jac, tau, fb, f0, con);
  check_rank(jac);
  const ForceBounds box = force_bounds(con, fb, f0);
  if ((box.lo.array() > box.hi.array()).any()) return std::nullopt;

  const auto active = solve_active_set(jac, tau, box);
  if (!active) return std::nullopt;

  // Re-solve on the final active set: fixed components at their bounds, the
  // rest as the least-norm solution of the remaining equality.
  const int n = static_cast<int>(jac.rows());
  ActuatorVector f = ActuatorVector::Zero(n);
  std::vector<bool> fixed(n, false);
  for (const Bound& c : *active) {
    f(c.actuator) = c.sign > 0 ? box.lo(c.actuator) : box.hi(c.actuator);
    fixed[c.actuator] = true;
  }
  std::vector<int> free_idx;
  for (int k = 0; k < n; ++k) if (!fixed[k]) free_idx.push_back(k);
  if (!free_idx.empty()) {
    Eigen::MatrixXd jf(free_idx.size(), jac.cols());
    for (std::size_t i = 0; i < free_idx.size(); ++i) jf.row(i) = jac.row(free_idx[i]);
    const Eigen::VectorXd rhs = tau - jac.transpose() * f;
    const Eigen::VectorXd ff = jf.transpose().completeOrthogonalDecomposition().solve(rhs);
    for (std::size_t i = 0; i < free_idx.size(); ++i) f(free_idx[i]) = ff(i);
  }

  const double residual = (jac.transpose() * f - tau).lpNorm<Eigen::Infinity>();
  double scale = 1.0;
  for (int k = 0; k < n; ++k) {
    if (std::isfinite(box.lo(k))) scale = std::max(scale, std::abs(box.lo(k)));
    if (std::isfinite(box.hi(k))) scale = std::max(scale, std::abs(box.hi(k)));
  }
  const double tol = 1e-9 * scale;
  const bool inside = ((f - box.lo).array() >= -tol).all() && ((box.hi - f).array() >= -tol).all();
  if (residual > 1e-8 * (1.0 + tau.lpNorm<Eigen::Infinity>()) || !inside) {
    throw Error("force distribution failed KKT verification (residual " +
                std::to_string(residual) + ")");
  }
  return f;
}

bool wrench_feasible(const Eigen::MatrixXd& jac, const Cotangent& tau, const ActuatorVector& fb,
                     const ActuatorVector& f0, const ForceConstraints& con) {
  check_sizes(jac, tau, fb, f0, con);
  check_rank(jac);
  const ForceBounds box = force_bounds(con, fb, f0);
  if ((box.lo.array() > box.hi.array()).any()) return false;
  return solve_active_set(jac, tau, box).has_value();
}

}  // namespace pac
