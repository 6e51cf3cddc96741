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

#include "pamtwin/estimator.hpp"

#include <algorithm>
#include <cmath>

#include "pamtwin/pneumatics.hpp"

namespace pamtwin {

PressureNoise EstimatorConfig::noise() const {
  PressureNoise n;
  n.process = process_cov_diag.asDiagonal();
  n.measurement = measurement_cov_diag.asDiagonal();
  return n;
}

JointState default_initial_state(const PamParams& params) {
  return {0.0, 0.0, steady_pressure_for_input(5.5, Side::kFirst, params),
          steady_pressure_for_input(5.5, Side::kSecond, params)};
}

Eigen::Vector2d measurement_map(const JointState& x) { return {x.p1, x.p2}; }

EstimateRecord make_record(const StateBelief& belief, const PamParams& params) {
  EstimateRecord r;
  r.belief = belief;
  const JointState x = JointState::from_vector(belief.mean);
  r.psi_hat = x.psi;
  r.psi_dot_hat = x.psi_dot;
  r.p1_hat = x.p1;
  r.p2_hat = x.p2;
  const auto f = muscle_forces(x, params);
  r.f1_hat = f.first;
  r.f2_hat = f.second;
  r.tau_hat = joint_torque(x.psi, f.first, f.second, params);
  return r;
}

EstimateRecord initial_estimate(const PamParams& params, const EstimatorConfig& config) {
  StateBelief b;
  b.mean = config.initial_state.value_or(default_initial_state(params)).to_vector();
  b.cov = config.initial_cov_diag.asDiagonal();
  return make_record(b, params);
}

EstimateRecord estimate_step(const EstimateRecord& previous, const ControlInput& u,
                             const Eigen::Vector2d& y, const PamParams& params,
                             const EstimatorConfig& config) {
  const PressureNoise noise = config.noise();
  const auto process = [&](const Eigen::Vector4d& s) {
    return step_with_end_stops(JointState::from_vector(s), u, params).to_vector();
  };

  bool in_band = y.allFinite();
  if (config.reject_out_of_band && in_band) {
    for (int i = 0; i < 2; ++i) {
      const double band = 3.0 * std::sqrt(config.measurement_cov_diag[i]);
      in_band = in_band && y[i] >= params.atm_pressure - band &&
                y[i] <= params.tank_pressure + band;
    }
  }

  StateBelief belief = ukf::predict(previous.belief, noise, process, config.kappa);
  if (in_band) {
    belief = ukf::update(belief, y, noise,
                         [](const Eigen::Vector4d& s) -> Eigen::Vector2d { return {s[2], s[3]}; },
                         config.kappa);
  }

  // Keep the mean inside the model's validity region.
  belief.mean[2] = std::clamp(belief.mean[2], params.atm_pressure, params.tank_pressure);
  belief.mean[3] = std::clamp(belief.mean[3], params.atm_pressure, params.tank_pressure);
  if (params.locked_joint) {
    belief.mean[0] = 0.0;
    belief.mean[1] = 0.0;
  } else {
    belief.mean = apply_end_stops(JointState::from_vector(belief.mean), params).to_vector();
  }

  EstimateRecord next = make_record(belief, params);
  next.rejected = !in_band;
  return next;
}

PamEstimator::PamEstimator(PamParams params, EstimatorConfig config)
    : params_(std::move(params)), config_(std::move(config)) {
  params_.validate();
  record_ = initial_estimate(params_, config_);
}

const EstimateRecord& PamEstimator::step(const ControlInput& u, const Eigen::Vector2d& y) {
  record_ = estimate_step(record_, u, y, params_, config_);
  if (record_.rejected) ++rejected_;
  return record_;
}

}  // namespace pamtwin
