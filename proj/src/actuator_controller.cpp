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

#include "pac/actuator_controller.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "pac/errors.hpp"

namespace pac {

namespace {

// Polynomials as ascending coefficient vectors.
using Poly = Eigen::VectorXd;

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out = Poly::Zero(std::max(a.size(), b.size()));
  out.head(a.size()) += a;
  out.head(b.size()) += b;
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out = Poly::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    for (Eigen::Index j = 0; j < b.size(); ++j) out(i + j) += a(i) * b(j);
  }
  return out;
}

// det(sI - X) by Faddeev-LeVerrier.
Poly characteristic_polynomial(const Eigen::MatrixXd& X) {
  const auto n = X.rows();
  Poly c = Poly::Zero(n + 1);
  c(n) = 1.0;
  Eigen::MatrixXd Mk = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    Mk = X * Mk + c(n - k + 1) * Eigen::MatrixXd::Identity(n, n);
    c(n - k) = -(X * Mk).trace() / static_cast<double>(k);
  }
  return c;
}

Poly trim(const Poly& p) {
  Eigen::Index deg = p.size() - 1;
  while (deg > 0 && p(deg) == 0.0) --deg;
  return p.head(deg + 1);
}

std::vector<std::complex<double>> roots(const Poly& p_in) {
  const Poly p = trim(p_in);
  const auto deg = p.size() - 1;
  if (deg < 1) return {};
  if (deg == 1) return {std::complex<double>(-p(0) / p(1), 0.0)};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  companion.bottomLeftCorner(deg - 1, deg - 1).setIdentity();
  companion.col(deg - 1) = -p.head(deg) / p(deg);
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < deg; ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

int declared_degree(const ActuatorModel& model) {
  int deg = 2;
  if (!model.c.empty()) deg = std::max(deg, static_cast<int>(model.c.size()) + 2);
  deg = std::max(deg, static_cast<int>(model.k.size()));
  return deg;
}

// Left-hand side of the load-normalised actuator law, acting on l.
Poly plant_polynomial(const ActuatorModel& model, double m) {
  if (!(m > 0.0)) throw Error("actuator load mass must be positive");
  const int deg = declared_degree(model);
  Poly P = Poly::Zero(deg + 1);
  P(2) = 1.0;
  for (std::size_t j = 0; j < model.c.size(); ++j) P(j + 3) += model.c[j];
  if (std::isfinite(m)) {
    for (std::size_t i = 0; i < model.k.size(); ++i) P(i + 1) += model.k[i] / m;
  }
  if (P(deg) == 0.0) {
    throw Error("ill-posed actuator model: leading coefficient vanishes for m = " +
                std::to_string(m));
  }
  return P;
}

// Right-hand side, acting on a_c.
Poly input_polynomial(const ActuatorModel& model) {
  Poly Q = Poly::Zero(model.c_tilde.size() + 1);
  Q(0) = 1.0;
  for (std::size_t j = 0; j < model.c_tilde.size(); ++j) Q(j + 1) = model.c_tilde[j];
  return trim(Q);
}

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

void ControllerGains::validate() const {
  const auto s = A.rows();
  if (A.cols() != s || B.size() != s || C.size() != s) {
    throw DimensionMismatch("controller gains: A must be s x s with B, C of length s");
  }
  if (D.size() < 1) throw DimensionMismatch("controller gains: derivative order l must be >= 1");
}

ControllerGains pd_gains(double kp, double kd, double k0, double m0) {
  if (!(kp > 0.0) || !(kd >= 0.0) || !std::isfinite(kp) || !std::isfinite(kd)) {
    throw ValidationError("gains", "pd gains need kp > 0 and kd >= 0");
  }
  ControllerGains g;
  g.A.resize(0, 0);
  g.B.resize(0);
  g.C.resize(0);
  g.D.resize(2);
  g.D << kp, kd;
  g.k0 = k0;
  g.m0 = m0;
  return g;
}

ControllerGains state_space_gains(const Eigen::MatrixXd& A, const Eigen::VectorXd& B,
                                  const Eigen::RowVectorXd& C, const Eigen::RowVectorXd& D,
                                  double k0, double m0) {
  ControllerGains g{A, B, C, D, k0, m0};
  g.validate();
  return g;
}

double open_loop_command(const ControllerGains& gains, double m, const DerivativeStack& ref) {
  if (ref.size() < 3) throw DimensionMismatch("reference stack needs [r, r', r'']");
  if (m < gains.m0) throw Error("load mass below the no-load mass");
  return m * ref(2) + gains.k0 * ref(1);
}

Discretization discretize(const ControllerGains& gains, double dt) {
  const int s = gains.state_dim();
  Discretization out;
  if (s == 0) {
    out.phi.resize(0, 0);
    out.gamma.resize(0);
    return out;
  }
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(s + 1, s + 1);
  aug.topLeftCorner(s, s) = gains.A * dt;
  aug.topRightCorner(s, 1) = gains.B * dt;
  const Eigen::MatrixXd e = aug.exp();
  out.phi = e.topLeftCorner(s, s);
  out.gamma = e.topRightCorner(s, 1);
  return out;
}

FeedforwardResult feedforward_step(const ControllerGains& gains, const Eigen::VectorXd& x,
                                   const DerivativeStack& error, const DerivativeStack& ref,
                                   double m, double dt) {
  gains.validate();
  if (!(dt > 0.0)) throw Error("dt must be positive");
  if (x.size() != gains.state_dim()) throw DimensionMismatch("controller state dimension");
  if (error.size() != gains.derivative_order()) throw DimensionMismatch("error stack length");
  if (ref.size() < 3) throw DimensionMismatch("reference stack needs [r, r', r'']");

  FeedforwardResult out;
  const double k0_over_m = std::isfinite(m) ? gains.k0 / m : 0.0;
  out.command_accel = ref(2) + k0_over_m * ref(1) + gains.D.dot(error);
  if (gains.state_dim() > 0) {
    out.command_accel += gains.C.dot(x);
    const Discretization dz = discretize(gains, dt);
    out.state = dz.phi * x + dz.gamma * error(0);
  } else {
    out.state = x;
  }
  return out;
}

void BackwardDifference::push(const Eigen::VectorXd& sample) {
  samples_.push_front(sample);
  while (static_cast<int>(samples_.size()) > window_) samples_.pop_back();
}

Eigen::MatrixXd BackwardDifference::stack(int order, double dt) const {
  if (samples_.empty()) throw Error("BackwardDifference: no samples");
  const auto dim = samples_.front().size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, order);
  for (int j = 0; j < order; ++j) {
    if (j >= static_cast<int>(samples_.size())) break;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i <= j; ++i) {
      const double sign = (i % 2 == 0) ? 1.0 : -1.0;
      acc += sign * static_cast<double>(binomial(j, i)) * samples_[i];
    }
    out.col(j) = acc / std::pow(dt, j);
  }
  return out;
}

std::vector<std::complex<double>> closed_loop_poles(const ControllerGains& gains,
                                                    const ActuatorModel& model, double m) {
  gains.validate();
  const Poly P = plant_polynomial(model, m);
  const Poly Q = input_polynomial(model);
  const Poly a = characteristic_polynomial(gains.A);
  Poly b = Poly::Zero(1);
  if (gains.state_dim() > 0) {
    b = poly_add(characteristic_polynomial(gains.A - gains.B * gains.C), -a);
  }
  const Poly Dpoly = gains.D.transpose();
  const Poly chi = poly_add(poly_mul(P, a), poly_mul(Q, poly_add(b, poly_mul(Dpoly, a))));
  if (trim(chi).size() < 2) throw Error("ill-posed closed loop: constant characteristic polynomial");
  return roots(chi);
}

StabilityReport stability_check(const ControllerGains& gains, const ActuatorModel& model,
                                const std::vector<double>& masses) {
  StabilityReport report;
  report.passed = true;
  for (double m : masses) {
    StabilityEntry e;
    e.mass = m;
    e.poles = closed_loop_poles(gains, model, m);
    e.max_real_part = -std::numeric_limits<double>::infinity();
    for (const auto& p : e.poles) e.max_real_part = std::max(e.max_real_part, p.real());
    e.stable = e.max_real_part < -1e-9;
    report.passed = report.passed && e.stable;
    report.entries.push_back(std::move(e));
  }
  return report;
}

SingleActuatorTrace simulate_single_actuator(const ControllerGains& gains,
                                             const ActuatorModel& model, double m,
                                             const ScalarReference& reference, double dt,
                                             double duration,
                                             const SingleActuatorOptions& options) {
  gains.validate();
  if (!(dt > 0.0) || !(duration >= 0.0)) throw Error("dt must be positive, duration non-negative");

  // Controllable canonical realisation of l = Q(s)/P(s) a_c.
  const Poly P = plant_polynomial(model, m);
  const Poly Q = input_polynomial(model);
  const auto order = P.size() - 1;
  if (Q.size() - 1 >= order) throw Error("actuator model is not strictly proper");
  const Poly p = P / P(order);
  const Poly q = Q / P(order);

  Eigen::VectorXd z = Eigen::VectorXd::Zero(order);
  {
    const DerivativeStack r0 = reference(0.0);
    const double l0 = options.start_on_reference ? r0(0) : options.initial_value;
    const double v0 = options.start_on_reference ? r0(1) : options.initial_rate;
    if (q.size() == 1) {
      z(0) = l0 / q(0);
      z(1) = v0 / q(0);
    } else {
      z(0) = l0 / q(0);
    }
  }
  auto output = [&](const Eigen::VectorXd& zz) { return q.dot(zz.head(q.size())); };
  auto deriv = [&](const Eigen::VectorXd& zz, double u) {
    Eigen::VectorXd dz(order);
    dz.head(order - 1) = zz.tail(order - 1);
    dz(order - 1) = u - p.head(order).dot(zz);
    return dz;
  };

  const int l = gains.derivative_order();
  BackwardDifference errors(std::max(l, 1));
  Eigen::VectorXd x = Eigen::VectorXd::Zero(gains.state_dim());
  const long ticks = static_cast<long>(std::floor(duration / dt + 1e-9));
  const int sub = std::max(options.substeps, 1);
  const double h = dt / sub;

  SingleActuatorTrace trace;
  for (long k = 0; k <= ticks; ++k) {
    const double t = static_cast<double>(k) * dt;
    const DerivativeStack ref = reference(t);
    const double value = output(z);
    const double e = ref(0) - value;
    errors.push(Eigen::VectorXd::Constant(1, e));
    const DerivativeStack estack = errors.stack(l, dt).row(0).transpose();
    const FeedforwardResult ff = feedforward_step(gains, x, estack, ref, m, dt);
    x = ff.state;

    trace.t.push_back(t);
    trace.value.push_back(value);
    trace.error.push_back(e);
    trace.command_accel.push_back(ff.command_accel);
    trace.command_force.push_back(std::isfinite(m) ? m * ff.command_accel
                                                   : std::numeric_limits<double>::quiet_NaN());
    if (k == ticks) break;

    const double u = ff.command_accel;
    for (int i = 0; i < sub; ++i) {
      const Eigen::VectorXd k1 = deriv(z, u);
      const Eigen::VectorXd k2 = deriv(z + 0.5 * h * k1, u);
      const Eigen::VectorXd k3 = deriv(z + 0.5 * h * k2, u);
      const Eigen::VectorXd k4 = deriv(z + h * k3, u);
      z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!z.allFinite() || z.lpNorm<Eigen::Infinity>() > 1e9) {
      throw NumericBlowup("single-actuator simulation diverged at t = " + std::to_string(t));
    }
  }
  return trace;
}

}  // namespace pac
