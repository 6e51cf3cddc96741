// Copyright 2026 The pamtwin Authors
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

#include "pamtwin/plant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pamtwin/errors.hpp"
#include "pamtwin/pneumatics.hpp"

namespace pamtwin {
namespace {

double sign(double v) { return (v > 0.0) - (v < 0.0); }

JointState project(JointState x, const PamParams& p) {
  x.p1 = std::clamp(x.p1, p.atm_pressure, p.tank_pressure);
  x.p2 = std::clamp(x.p2, p.atm_pressure, p.tank_pressure);
  if (p.locked_joint) {
    x.psi = 0.0;
    x.psi_dot = 0.0;
  }
  return x;
}

bool all_finite(const JointState& x) {
  return std::isfinite(x.psi) && std::isfinite(x.psi_dot) && std::isfinite(x.p1) &&
         std::isfinite(x.p2);
}

// Classical RK4 over one sampling period with the friction torque frozen.
JointState integrate(const JointState& x, const ControlInput& u, double friction,
                     const PamParams& params) {
  const double h = params.sample_period / params.rk4_substeps;
  Eigen::Vector4d s = x.to_vector();
  const auto rhs = [&](const Eigen::Vector4d& v) {
    return state_derivative(JointState::from_vector(v), u, friction, params);
  };
  for (int i = 0; i < params.rk4_substeps; ++i) {
    const Eigen::Vector4d k1 = rhs(s);
    const Eigen::Vector4d k2 = rhs(s + 0.5 * h * k1);
    const Eigen::Vector4d k3 = rhs(s + 0.5 * h * k2);
    const Eigen::Vector4d k4 = rhs(s + h * k3);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  JointState next = JointState::from_vector(s);
  if (!all_finite(next)) {
    throw NumericalError("plant step produced a non-finite state");
  }
  return next;
}

}  // namespace

ControlInput::ControlInput(double u1, double u2)
    : u1_(std::clamp(u1, kMin, kMax)), u2_(std::clamp(u2, kMin, kMax)) {}

MuscleLengths muscle_lengths(double psi, const PamParams& params) {
  const double dl = params.seesaw_radius * std::sin(psi);
  return {params.neutral_length - dl, params.neutral_length + dl};
}

double muscle_volume(double length, const PamParams& params) {
  if (!(length >= params.min_length && length <= params.max_length)) {
    throw ModelDomainError("muscle length " + std::to_string(length) +
                           " m is outside the model validity interval");
  }
  return (params.vol_d1 * length + params.vol_d2) * length + params.vol_d3;
}

double muscle_volume_rate(double length, double length_rate, const PamParams& params) {
  return (2.0 * params.vol_d1 * length + params.vol_d2) * length_rate;
}

double contraction_force(double pressure, double length, Side side, const PamParams& params) {
  const auto& c = params.force[index_of(side)];
  return (c.v1 * length + c.v2) * pressure + (c.w1 * length + c.w2);
}

MuscleForces muscle_forces(const JointState& x, const PamParams& params) {
  const auto l = muscle_lengths(x.psi, params);
  return {contraction_force(x.p1, l.first, Side::kFirst, params),
          contraction_force(x.p2, l.second, Side::kSecond, params)};
}

double joint_torque(double psi, double f1, double f2, const PamParams& params) {
  return params.seesaw_radius * std::cos(psi) * (f1 - f2);
}

CoulombTerms coulomb_terms(double f1, double f2, double p1, double p2, const PamParams& params) {
  const double floor = params.atm_pressure + params.pressure_floor_margin;
  const double d1 = std::max(p1, floor) - params.atm_pressure;
  const double d2 = std::max(p2, floor) - params.atm_pressure;
  return {params.shaft_radius * params.shaft_coulomb_coeff * std::abs(f1 + f2 - params.weight()),
          params.tube_coulomb_coeff * (1.0 / (d1 * d1) + 1.0 / (d2 * d2))};
}

FrictionTorque friction_torque(double predicted_velocity, double coulomb, double admittance,
                               double viscous) {
  if (std::abs(predicted_velocity) > admittance * coulomb) {
    return {(coulomb * sign(predicted_velocity) + viscous * predicted_velocity) /
                (1.0 + admittance * viscous),
            FrictionMode::kSlip};
  }
  return {predicted_velocity / admittance, FrictionMode::kStick};
}

double friction_admittance(const PamParams& params) {
  return params.sample_period / params.inertia;
}

FrictionTorque friction_torque(double predicted_velocity, const CoulombTerms& coulomb,
                               const PamParams& params) {
  return friction_torque(predicted_velocity, coulomb.total(), friction_admittance(params),
                         params.viscous_coeff);
}

Eigen::Vector4d state_derivative(const JointState& x, const ControlInput& u, double friction,
                                 const PamParams& params) {
  const auto l = muscle_lengths(x.psi, params);
  const double v1 = muscle_volume(l.first, params);
  const double v2 = muscle_volume(l.second, params);

  double accel = 0.0;
  double vdot1 = 0.0;
  double vdot2 = 0.0;
  if (!params.locked_joint) {
    const double ldot = params.seesaw_radius * std::cos(x.psi) * x.psi_dot;
    vdot1 = muscle_volume_rate(l.first, -ldot, params);
    vdot2 = muscle_volume_rate(l.second, ldot, params);
    const double f1 = contraction_force(x.p1, l.first, Side::kFirst, params);
    const double f2 = contraction_force(x.p2, l.second, Side::kSecond, params);
    const double tau = joint_torque(x.psi, f1, f2, params);
    accel = (tau - friction - params.static_torque_coeff * x.psi) / params.inertia;
  }

  const double m1 = valve_mass_flow(u.u1(), x.p1, Side::kFirst, params).mass_flow;
  const double m2 = valve_mass_flow(u.u2(), x.p2, Side::kSecond, params).mass_flow;
  return {params.locked_joint ? 0.0 : x.psi_dot, accel,
          pressure_rate(x.p1, v1, vdot1, m1, params), pressure_rate(x.p2, v2, vdot2, m2, params)};
}

StepResult advance(const JointState& x_in, const ControlInput& u, const PamParams& params) {
  const JointState x = project(x_in, params);

  FrictionTorque friction{0.0, FrictionMode::kStick};
  double predicted = 0.0;
  if (!params.locked_joint) {
    const auto f = muscle_forces(x, params);
    const double drive = joint_torque(x.psi, f.first, f.second, params) -
                         params.static_torque_coeff * x.psi;
    const double z = friction_admittance(params);
    predicted = x.psi_dot + z * drive;
    friction = friction_torque(predicted, coulomb_terms(f.first, f.second, x.p1, x.p2, params),
                               params);
  }

  JointState next = integrate(x, u, friction.torque, params);
  if (friction.mode == FrictionMode::kStick) {
    next.psi_dot = 0.0;
  } else if (friction.torque != 0.0 && next.psi_dot * friction.torque < 0.0) {
    // Held friction carried the joint through zero velocity: it came to rest
    // inside the period.
    next.psi_dot = 0.0;
  }
  return {project(next, params), friction, predicted};
}

JointState step(const JointState& x, const ControlInput& u, const PamParams& params) {
  return advance(x, u, params).state;
}

PlantOutput output(const JointState& x, const PamParams& params) {
  const auto f = muscle_forces(x, params);
  return {x.psi, x.p1, x.p2, joint_torque(x.psi, f.first, f.second, params)};
}

double angle_limit(const PamParams& params) {
  const double reach = std::min(params.max_length - params.neutral_length,
                                params.neutral_length - params.min_length) /
                       params.seesaw_radius;
  return reach >= 1.0 ? 0.5 * std::numbers::pi : std::asin(reach);
}

JointState apply_end_stops(const JointState& x, const PamParams& params) {
  // Slightly inside the limit so rounding in sin() cannot leave the interval.
  const double stop = angle_limit(params) * (1.0 - 1e-9);
  JointState y = x;
  if (std::abs(y.psi) >= stop) {
    y.psi = std::copysign(stop, y.psi);
    if (y.psi * y.psi_dot > 0.0) y.psi_dot = 0.0;
  }
  return y;
}

JointState step_with_end_stops(const JointState& x, const ControlInput& u,
                               const PamParams& params) {
  const JointState start = apply_end_stops(x, params);
  try {
    return step(start, u, params);
  } catch (const ModelDomainError&) {
  }
  // The joint reached a stop within the period: hold it there and advance
  // the pressures only.
  JointState held = start;
  held.psi = std::copysign(angle_limit(params) * (1.0 - 1e-9), start.psi_dot != 0.0
                                                                    ? start.psi_dot
                                                                    : start.psi);
  held.psi_dot = 0.0;
  PamParams fixed = params;
  fixed.locked_joint = true;
  JointState next = integrate(held, u, 0.0, fixed);
  next.psi = held.psi;
  next.psi_dot = 0.0;
  return project(next, params);
}

double equilibrium_angle(double p1, double p2, const PamParams& params) {
  const double limit = angle_limit(params);
  const auto residual = [&](double psi) {
    const auto f = muscle_forces({psi, 0.0, p1, p2}, params);
    return joint_torque(psi, f.first, f.second, params) - params.static_torque_coeff * psi;
  };
  double lo = -limit;
  double hi = limit;
  const double r_lo = residual(lo);
  const double r_hi = residual(hi);
  if (r_lo < 0.0 || r_hi > 0.0) {
    throw ModelDomainError("no static equilibrium inside the validity region");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

JointState vented_rest(const PamParams& params) {
  return {0.0, 0.0, params.atm_pressure, params.atm_pressure};
}

SteadyState steady_state(const ControlInput& u, const PamParams& params,
                         const SteadyStateOptions& options) {
  const double dt = params.sample_period;
  const auto max_steps = static_cast<long>(std::ceil(options.timeout / dt));
  JointState x = vented_rest(params);
  double hold_start = -1.0;
  for (long k = 0; k < max_steps; ++k) {
    const JointState next = step(x, u, params);
    const double t_next = (k + 1) * dt;
    const bool quiet = std::abs(next.psi_dot) < options.velocity_tol &&
                       std::abs(next.p1 - x.p1) / dt < options.pressure_rate_tol &&
                       std::abs(next.p2 - x.p2) / dt < options.pressure_rate_tol;
    x = next;
    if (!quiet) {
      hold_start = -1.0;
      continue;
    }
    if (hold_start < 0.0) hold_start = k * dt;
    if (t_next - hold_start >= options.hold_time - 0.5 * dt) {
      return {x.psi, x.p1, x.p2, hold_start};
    }
  }
  throw ConvergenceError("steady_state did not settle within " +
                         std::to_string(options.timeout) + " s of model time");
}

double pressure_rise_time(const ControlInput& u, Side side, const PamParams& params,
                          double timeout) {
  const double start = params.atm_pressure;
  const double target = start + 0.9 * (steady_pressure_for_input(u[side], side, params) - start);
  if (!(target > start)) {
    throw ValidationError("pressure_rise_time: the input produces no pressure rise");
  }
  const double dt = params.sample_period;
  const auto max_steps = static_cast<long>(std::ceil(timeout / dt));
  JointState x = vented_rest(params);
  for (long k = 0; k < max_steps; ++k) {
    const JointState next = step(x, u, params);
    const double before = x.pressure(side);
    const double after = next.pressure(side);
    if (after >= target) {
      return (k + (target - before) / (after - before)) * dt;
    }
    x = next;
  }
  throw ConvergenceError("pressure did not reach 90% of its static value in time");
}

}  // namespace pamtwin
