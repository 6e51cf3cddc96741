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

// Push-pull PI controllers that close the loop on UKF estimates.

#pragma once

#include <optional>
#include <string>

#include "pamtwin/estimator.hpp"
#include "pamtwin/params.hpp"
#include "pamtwin/plant.hpp"
#include "pamtwin/scenario.hpp"
#include "pamtwin/trace.hpp"

namespace pamtwin {

enum class LoopMode { kAngle, kTorque };

/// Unit of the angle error fed to the controller.
enum class ErrorUnits { kDegrees, kRadians };

/// Weight of the integral state in the output.
enum class IntegralForm {
  kPerSample,  ///< (Ti / T_stp) x_c
  kPerSecond,  ///< Ti T_stp x_c, i.e. Ti times the time integral of e
};

ErrorUnits parse_error_units(const std::string& name);
IntegralForm parse_integral_form(const std::string& name);
std::string to_string(ErrorUnits units);
std::string to_string(IntegralForm form);

struct PiController {
  double tp = 5.45;
  double ti = 1.55;
  double sample_period = 1e-3;
  double bias1 = 5.5;
  double bias2 = 5.5;
  double x_c = 0.0;
  double u_min = ControlInput::kMin;
  double u_max = ControlInput::kMax;
  /// Bound on |x_c|. Non-positive selects the value at which the integral
  /// term alone spans the output range.
  double windup_limit = 0.0;
  IntegralForm form = IntegralForm::kPerSample;

  /// Default gains per mode: angle (5.45, 1.55), torque (7.45, 4.75).
  static PiController for_mode(LoopMode mode, double sample_period = 1e-3);

  double integral_gain() const;
  double effective_windup_limit() const;
  /// Throws ValidationError on non-finite gains or u_min >= u_max.
  void validate() const;
};

struct PiOutput {
  ControlInput u;
  double u1_raw;  ///< before saturation
  double u2_raw;
  PiController next;
};

/// u1 = k_i x_c + Tp e + bias1, u2 = -k_i x_c - Tp e + bias2, saturated to
/// [u_min, u_max]. The state advances x_c' = x_c + e unless both channels
/// are saturated and e would push them further, and is then clamped to the
/// windup limit. Throws ValidationError on non-finite e.
PiOutput pi_step(const PiController& ctrl, double e);

struct ClosedLoopSpec {
  LoopMode mode = LoopMode::kAngle;
  ReferenceSchedule reference;  ///< rad (angle) or N m (torque)
  double duration = 10.0;
  PamParams plant;              ///< simulated rig
  PamParams model;              ///< estimator's internal model
  NoiseSettings noise;
  EstimatorConfig estimator;
  PiController controller;
  ErrorUnits units = ErrorUnits::kDegrees;
  /// Initial true state; default_initial_state(plant) when empty.
  std::optional<JointState> initial_state;
};

/// Measure, estimate, compute e = r - (psi_hat or tau_hat), step the PI law,
/// apply u. True psi and tau are logged for evaluation only. Torque mode
/// locks the joint in both the rig and the model. A numerical failure ends
/// the run and returns the partial trace marked incomplete.
Trace run_sensorless_loop(const ClosedLoopSpec& spec);

}  // namespace pamtwin
