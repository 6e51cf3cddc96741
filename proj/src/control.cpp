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

#include "pamtwin/control.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "pamtwin/errors.hpp"

namespace pamtwin {

ErrorUnits parse_error_units(const std::string& name) {
  if (name == "deg") return ErrorUnits::kDegrees;
  if (name == "rad") return ErrorUnits::kRadians;
  throw ValidationError("unknown error units: " + name);
}

IntegralForm parse_integral_form(const std::string& name) {
  if (name == "per_sample") return IntegralForm::kPerSample;
  if (name == "per_second") return IntegralForm::kPerSecond;
  throw ValidationError("unknown integral form: " + name);
}

std::string to_string(ErrorUnits units) {
  return units == ErrorUnits::kDegrees ? "deg" : "rad";
}

std::string to_string(IntegralForm form) {
  return form == IntegralForm::kPerSample ? "per_sample" : "per_second";
}

PiController PiController::for_mode(LoopMode mode, double sample_period) {
  PiController c;
  c.sample_period = sample_period;
  if (mode == LoopMode::kTorque) {
    c.tp = 7.45;
    c.ti = 4.75;
  }
  return c;
}

double PiController::integral_gain() const {
  return form == IntegralForm::kPerSample ? ti / sample_period : ti * sample_period;
}

double PiController::effective_windup_limit() const {
  if (windup_limit > 0.0) return windup_limit;
  const double k = std::abs(integral_gain());
  return k > 0.0 ? (u_max - u_min) / k : std::numeric_limits<double>::infinity();
}

void PiController::validate() const {
  if (!(std::isfinite(tp) && std::isfinite(ti) && std::isfinite(bias1) &&
        std::isfinite(bias2) && std::isfinite(x_c))) {
    throw ValidationError("controller: non-finite gain, bias or state");
  }
  if (!(sample_period > 0.0)) throw ValidationError("controller: sample period must be positive");
  if (!(u_min < u_max)) throw ValidationError("controller: need u_min < u_max");
}

PiOutput pi_step(const PiController& ctrl, double e) {
  if (!std::isfinite(e)) throw ValidationError("controller: non-finite error");
  const double v = ctrl.integral_gain() * ctrl.x_c + ctrl.tp * e;
  const double raw1 = v + ctrl.bias1;
  const double raw2 = -v + ctrl.bias2;
  const double u1 = std::clamp(raw1, ctrl.u_min, ctrl.u_max);
  const double u2 = std::clamp(raw2, ctrl.u_min, ctrl.u_max);

  PiController next = ctrl;
  const bool both_saturated = u1 != raw1 && u2 != raw2;
  // Positive v drives u1 up and u2 down; e of the same sign deepens that.
  const bool deepens = (v > 0.0 && e > 0.0) || (v < 0.0 && e < 0.0);
  if (!(both_saturated && deepens)) {
    const double limit = ctrl.effective_windup_limit();
    next.x_c = std::clamp(ctrl.x_c + e, -limit, limit);
  }
  return {ControlInput(u1, u2), raw1, raw2, next};
}

Trace run_sensorless_loop(const ClosedLoopSpec& spec) {
  if (!(spec.duration > 0.0)) throw ValidationError("closed loop: duration must be positive");
  spec.controller.validate();

  PamParams plant = spec.plant;
  PamParams model = spec.model;
  if (spec.mode == LoopMode::kTorque) plant.locked_joint = model.locked_joint = true;
  plant.validate();
  model.validate();

  JointState x0 = spec.initial_state.value_or(default_initial_state(plant));
  if (plant.locked_joint) x0.psi = x0.psi_dot = 0.0;
  Twin twin(plant, x0, spec.noise);

  EstimatorConfig est_config = spec.estimator;
  if (est_config.initial_state && model.locked_joint) {
    est_config.initial_state->psi = est_config.initial_state->psi_dot = 0.0;
  }
  PamEstimator estimator(model, est_config);
  PiController ctrl = spec.controller;

  Trace trace;
  trace.sample_period = plant.sample_period;
  const auto n = static_cast<long>(std::llround(spec.duration / plant.sample_period));
  trace.rows.reserve(static_cast<std::size_t>(n) + 1);

  ControlInput u;
  for (long k = 0; k <= n; ++k) {
    TraceRow row;
    row.t = static_cast<double>(k) * plant.sample_period;
    try {
      if (k > 0) twin.advance(u);
      const Eigen::Vector2d y = twin.measure();
      record_truth(row, twin, y);

      const auto start = std::chrono::steady_clock::now();
      const EstimateRecord& rec = k > 0 ? estimator.step(u, y) : estimator.current();
      row.step_cost =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      record_estimate(row, rec);

      const double r = spec.reference.at(row.t);
      double e = 0.0;
      if (spec.mode == LoopMode::kAngle) {
        e = r - rec.psi_hat;
        if (spec.units == ErrorUnits::kDegrees) e *= 180.0 / std::numbers::pi;
      } else {
        e = r - rec.tau_hat;
      }
      const PiOutput out = pi_step(ctrl, e);
      ctrl = out.next;
      u = out.u;

      row.reference = r;
      row.ctrl_state = ctrl.x_c;
      row.u1 = u.u1();
      row.u2 = u.u2();
      row.u1_raw = out.u1_raw;
      row.u2_raw = out.u2_raw;
      trace.rows.push_back(row);
    } catch (const NumericalError& err) {
      trace.complete = false;
      trace.failure = err.what();
      break;
    }
  }
  return trace;
}

}  // namespace pamtwin
