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

// Nonlinear model of the antagonistic PAM joint.
//
// State x = [psi, psi_dot, P1, P2]. One call to step() advances a sampling
// period: the discrete stick/slip friction torque is decided from the
// friction-free predicted velocity, held constant, and the continuous
// dynamics are integrated with classical RK4. Mode switching (valve flow
// regimes, flow direction, stick/slip) happens through the branches of the
// individual formulas.

#pragma once

#include <Eigen/Core>

#include "pamtwin/params.hpp"

namespace pamtwin {

struct JointState {
  double psi = 0.0;      ///< joint angle (rad)
  double psi_dot = 0.0;  ///< joint velocity (rad/s)
  double p1 = 0.0;       ///< PAM1 absolute pressure (Pa)
  double p2 = 0.0;       ///< PAM2 absolute pressure (Pa)

  Eigen::Vector4d to_vector() const { return {psi, psi_dot, p1, p2}; }
  static JointState from_vector(const Eigen::Vector4d& v) { return {v[0], v[1], v[2], v[3]}; }
  double pressure(Side s) const { return s == Side::kFirst ? p1 : p2; }

  friend bool operator==(const JointState&, const JointState&) = default;
};

/// Valve command voltages, clamped to [0, 10] V on construction.
class ControlInput {
 public:
  static constexpr double kMin = 0.0;
  static constexpr double kMax = 10.0;

  ControlInput() = default;
  ControlInput(double u1, double u2);

  double u1() const noexcept { return u1_; }
  double u2() const noexcept { return u2_; }
  double operator[](Side s) const noexcept { return s == Side::kFirst ? u1_ : u2_; }

  friend bool operator==(const ControlInput&, const ControlInput&) = default;

 private:
  double u1_ = 5.5;
  double u2_ = 5.5;
};

struct PlantOutput {
  double psi;
  double p1;
  double p2;
  double tau;
};

struct MuscleLengths {
  double first;
  double second;
};

struct MuscleForces {
  double first;
  double second;
};

/// l1 = L0 - r sin(psi), l2 = L0 + r sin(psi).
MuscleLengths muscle_lengths(double psi, const PamParams& params);

/// V = D1 l^2 + D2 l + D3. Throws ModelDomainError outside
/// [min_length, max_length].
double muscle_volume(double length, const PamParams& params);
double muscle_volume_rate(double length, double length_rate, const PamParams& params);

/// F = (v1 l + v2) P + (w1 l + w2) with the coefficients of `side`.
double contraction_force(double pressure, double length, Side side, const PamParams& params);

/// Contraction forces at the muscle lengths implied by x.psi.
MuscleForces muscle_forces(const JointState& x, const PamParams& params);

/// tau = r cos(psi) (F1 - F2).
double joint_torque(double psi, double f1, double f2, const PamParams& params);

struct CoulombTerms {
  double shaft;  ///< T_s
  double tube;   ///< T_p
  double total() const noexcept { return shaft + tube; }
};

/// T_s = r_p mu_s |F1 + F2 - M g| and the pressure-dependent tube term
/// T_p = mu_p (1/(P1-P_out)^2 + 1/(P2-P_out)^2). Pressures below
/// P_out + pressure_floor_margin are floored there.
CoulombTerms coulomb_terms(double f1, double f2, double p1, double p2, const PamParams& params);

enum class FrictionMode { kStick, kSlip };

struct FrictionTorque {
  double torque;
  FrictionMode mode;
};

/// Discrete-time stick/slip friction with implicit-Euler velocity
/// prediction. `admittance` is the velocity change per unit torque over one
/// sampling period, and `predicted_velocity` is the friction-free velocity
/// at the end of the period.
///   slip  (|v| >  Z Tc): T_f = (Tc sgn v + c v) / (1 + Z c)
///   stick (|v| <= Z Tc): T_f = v / Z
FrictionTorque friction_torque(double predicted_velocity, double coulomb, double admittance,
                               double viscous);

/// Step admittance of the joint, T_stp / J.
double friction_admittance(const PamParams& params);

/// friction_torque with the plant's own admittance and viscous coefficient.
FrictionTorque friction_torque(double predicted_velocity, const CoulombTerms& coulomb,
                               const PamParams& params);

/// Continuous-time right-hand side with the friction torque frozen.
Eigen::Vector4d state_derivative(const JointState& x, const ControlInput& u,
                                 double friction, const PamParams& params);

struct StepResult {
  JointState state;
  FrictionTorque friction;
  double predicted_velocity;
};

/// Advances one sampling period and reports the friction decision.
/// Throws NumericalError on non-finite results and ModelDomainError when the
/// joint leaves the muscle-length validity interval.
StepResult advance(const JointState& x, const ControlInput& u, const PamParams& params);

/// advance(x, u, params).state
JointState step(const JointState& x, const ControlInput& u, const PamParams& params);

/// step() with the ends of the validity region acting as rigid end stops:
/// a joint that would leave it is held at the stop with zero velocity while
/// the pressures evolve.
JointState step_with_end_stops(const JointState& x, const ControlInput& u,
                               const PamParams& params);

/// Largest |psi| that keeps both muscle lengths inside the validity interval.
double angle_limit(const PamParams& params);

/// Clamps psi to just inside +/-angle_limit() and drops outward velocity.
JointState apply_end_stops(const JointState& x, const PamParams& params);

/// [psi, P1, P2, tau].
PlantOutput output(const JointState& x, const PamParams& params);

/// Convergence settings for steady_state().
struct SteadyStateOptions {
  double velocity_tol = 1e-5;   ///< rad/s
  double pressure_rate_tol = 1.0;  ///< Pa/s
  double hold_time = 1.0;       ///< s the tolerances must hold
  double timeout = 60.0;        ///< s of model time
};

struct SteadyState {
  double psi;
  double p1;
  double p2;
  double settle_time;  ///< model time at which the hold window began (s)
};

/// Friction-free static angle for fixed pressures: the root of
/// tau(psi) - k_s psi inside the muscle-length validity region. Throws
/// ModelDomainError when the root lies outside that region.
double equilibrium_angle(double p1, double p2, const PamParams& params);

/// Vented muscles, joint at rest: psi = 0, P1 = P2 = P_out.
JointState vented_rest(const PamParams& params);

/// Simulates constant u from vented_rest() until the state settles.
/// Throws ConvergenceError on timeout.
SteadyState steady_state(const ControlInput& u, const PamParams& params,
                         const SteadyStateOptions& options = {});

/// Time from vented_rest() until muscle `side` first reaches 90% of its
/// static pressure rise under constant u. Throws ConvergenceError if that
/// does not happen within `timeout` seconds.
double pressure_rise_time(const ControlInput& u, Side side, const PamParams& params,
                          double timeout = 60.0);

}  // namespace pamtwin
