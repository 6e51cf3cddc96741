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

// Flat "key = value" run configuration.
//
// Physical parameters use the rig's table names (r_p, L0, P_tank, p_v11,
// A_12, Tp_coeff, mu_s, ...). Prefixing one with "est." changes only the
// estimator's internal model, e.g. "est.A_11 = 5.7e-8". Scenario keys are
// grouped as profile.*, noise.*, ukf.*, ctrl.* plus duration, seed and
// reference. Unknown keys are errors.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pamtwin/control.hpp"
#include "pamtwin/estimator.hpp"
#include "pamtwin/params.hpp"
#include "pamtwin/runner.hpp"
#include "pamtwin/scenario.hpp"

namespace pamtwin {

class RunConfig {
 public:
  /// Applies one setting. Throws ValidationError on unknown keys or
  /// malformed values.
  void set(const std::string& key, const std::string& value);
  /// Applies "key=value" (as given on the command line).
  void set(const std::string& assignment);

  /// Reads "key = value" lines; '#' starts a comment.
  void read(std::istream& in);
  void load(const std::string& path);

  PamParams plant() const;
  /// plant() with the est.* overrides applied.
  PamParams model() const;

  /// Complete scenario for a trace-producing mode. Control modes default
  /// to alternating +/-20 deg or +/-2 N m steps every 10 s over 30 s.
  Scenario scenario(RunMode mode) const;

  ProfileSpec profile;
  NoiseSettings noise;
  EstimatorConfig estimator;
  std::optional<double> duration;
  /// Control reference steps: angle values in degrees, torque in N m.
  std::vector<ReferenceStep> reference;

  std::optional<double> ctrl_tp;
  std::optional<double> ctrl_ti;
  std::optional<double> ctrl_bias;
  std::optional<double> ctrl_windup_limit;
  IntegralForm ctrl_form = IntegralForm::kPerSample;
  ErrorUnits ctrl_units = ErrorUnits::kDegrees;

 private:
  std::vector<std::pair<std::string, std::string>> plant_settings_;
  std::vector<std::pair<std::string, std::string>> model_settings_;
};

/// Sets one physical parameter by its config key.
void set_param(PamParams& params, const std::string& key, const std::string& value);
bool is_param_key(const std::string& key);

/// All physical parameters in config syntax, in a fixed order.
void write_params(std::ostream& out, const PamParams& params);

/// FNV-1a 64 of write_params() output, as 16 hex digits.
std::string params_hash(const PamParams& params);

}  // namespace pamtwin
