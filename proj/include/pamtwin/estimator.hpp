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

// Pressure-only joint angle / torque estimation: the UKF engine bound to
// the plant step as process model and the pressure selector as measurement.

#pragma once

#include <Eigen/Core>
#include <optional>

#include "pamtwin/params.hpp"
#include "pamtwin/plant.hpp"
#include "pamtwin/ukf.hpp"

namespace pamtwin {

using StateBelief = ukf::GaussianBelief<4>;
using PressureNoise = ukf::NoiseSpec<4, 2>;

struct EstimatorConfig {
  Eigen::Vector4d initial_cov_diag{1e-5, 1e-4, 1e6, 1e6};
  Eigen::Vector4d process_cov_diag{1e-5, 1e-4, 1e6, 1e6};
  Eigen::Vector2d measurement_cov_diag{1e8, 1e8};
  double kappa = 0.0;
  /// Reject measurements outside [P_out - 3 sigma_R, P_tank + 3 sigma_R].
  bool reject_out_of_band = true;
  /// Defaults to default_initial_state(params).
  std::optional<JointState> initial_state;

  PressureNoise noise() const;
};

/// Joint at rest at psi = 0 with both muscles at the static pressure their
/// valve holds for u = 5.5 V.
JointState default_initial_state(const PamParams& params);

struct EstimateRecord {
  double psi_hat = 0.0;
  double psi_dot_hat = 0.0;
  double p1_hat = 0.0;
  double p2_hat = 0.0;
  double f1_hat = 0.0;
  double f2_hat = 0.0;
  double tau_hat = 0.0;
  bool rejected = false;  ///< last measurement failed the sanity band
  StateBelief belief;
};

/// The pressure pair (P1, P2); psi and tau never reach the filter.
Eigen::Vector2d measurement_map(const JointState& x);

/// Builds a record (derived forces and torque) from a belief.
EstimateRecord make_record(const StateBelief& belief, const PamParams& params);

EstimateRecord initial_estimate(const PamParams& params, const EstimatorConfig& config);

/// One UKF cycle with f = plant step under u and g = measurement_map.
/// Out-of-band measurements are skipped (prediction only) and flagged.
EstimateRecord estimate_step(const EstimateRecord& previous, const ControlInput& u,
                             const Eigen::Vector2d& y, const PamParams& params,
                             const EstimatorConfig& config);

/// Stateful wrapper for one measurement stream.
class PamEstimator {
 public:
  PamEstimator(PamParams params, EstimatorConfig config);

  const EstimateRecord& step(const ControlInput& u, const Eigen::Vector2d& y);
  const EstimateRecord& current() const noexcept { return record_; }
  long rejected_count() const noexcept { return rejected_; }
  const PamParams& params() const noexcept { return params_; }

 private:
  PamParams params_;
  EstimatorConfig config_;
  EstimateRecord record_;
  long rejected_ = 0;
};

}  // namespace pamtwin
