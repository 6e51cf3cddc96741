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

// Experiment inputs: valve schedules, reference schedules, noise injection
// and the simulated rig ("twin") that produces noisy pressure readings.

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "pamtwin/estimator.hpp"
#include "pamtwin/params.hpp"
#include "pamtwin/plant.hpp"
#include "pamtwin/trace.hpp"

namespace pamtwin {

enum class RunMode {
  kOpenLoop,
  kEstimateOffline,
  kEstimateOnline,
  kControlAngle,
  kControlTorque,
  kSweep,
  kCalibrate,
  kBench,
};

RunMode parse_run_mode(const std::string& name);
std::string to_string(RunMode mode);

/// Piecewise-constant valve command starting at t.
struct InputStep {
  double t;
  double u1;
  double u2;
};

class InputSchedule {
 public:
  InputSchedule() = default;
  /// Throws ValidationError unless times strictly increase from 0 and every
  /// voltage lies in [0, 10].
  explicit InputSchedule(std::vector<InputStep> steps);

  ControlInput at(double t) const;
  const std::vector<InputStep>& steps() const noexcept { return steps_; }
  bool empty() const noexcept { return steps_.empty(); }

 private:
  std::vector<InputStep> steps_;
};

/// Piecewise-constant reference (rad for angle runs, N m for torque runs).
struct ReferenceStep {
  double t;
  double value;
};

class ReferenceSchedule {
 public:
  ReferenceSchedule() = default;
  explicit ReferenceSchedule(std::vector<ReferenceStep> steps);

  double at(double t) const;
  const std::vector<ReferenceStep>& steps() const noexcept { return steps_; }
  bool empty() const noexcept { return steps_.empty(); }

 private:
  std::vector<ReferenceStep> steps_;
};

struct ProfileSpec {
  enum class Kind { kConstant, kSteps, kRandom };
  Kind kind = Kind::kRandom;
  ControlInput constant{5.5, 5.5};
  std::vector<InputStep> steps;  ///< used by kSteps
  double duration = 130.0;
  std::uint64_t seed = 1;
  double u_low = 2.5;  ///< random level range (V)
  double u_high = 8.5;
  double dwell_min = 2.0;  ///< random dwell range (s)
  double dwell_max = 6.0;
  /// Random level pairs whose friction-free static angle exceeds this are
  /// redrawn (rad). Keeps the joint inside the model's validity region.
  double angle_limit = 20.0 * std::numbers::pi / 180.0;
};

InputSchedule generate_profile(const ProfileSpec& spec, const PamParams& params);

struct PressureSpan {
  double min_pressure;
  double max_pressure;
  bool spans;  ///< min <= low and max >= high
};

/// Noise-free simulation of the schedule from default_initial_state().
PressureSpan check_pressure_span(const InputSchedule& schedule, double duration,
                                 const PamParams& params, double low = 2.5e5,
                                 double high = 6.5e5);

/// How process noise enters the simulated truth after each step.
enum class ProcessNoiseMode {
  kNone,
  kScaled,  ///< covariance Q * T_stp
  kStrict,  ///< covariance Q
};

ProcessNoiseMode parse_process_noise(const std::string& name);
std::string to_string(ProcessNoiseMode mode);

struct NoiseSettings {
  ProcessNoiseMode process = ProcessNoiseMode::kScaled;
  Eigen::Vector4d process_cov_diag{1e-5, 1e-4, 1e6, 1e6};
  bool measurement = true;
  Eigen::Vector2d measurement_cov_diag{1e8, 1e8};
  std::uint64_t seed = 1;

  static NoiseSettings noiseless();
};

/// Simulated rig: the true state plus seeded process and sensor noise.
class Twin {
 public:
  Twin(PamParams params, const JointState& initial, const NoiseSettings& noise);

  const JointState& state() const noexcept { return state_; }
  const PamParams& params() const noexcept { return params_; }
  PlantOutput truth() const { return output(state_, params_); }

  /// Pressure readings of the current state with sensor noise.
  Eigen::Vector2d measure();
  /// One sampling period under u, then additive process noise.
  void advance(const ControlInput& u);

 private:
  PamParams params_;
  NoiseSettings noise_;
  JointState state_;
  std::mt19937_64 process_rng_;
  std::mt19937_64 sensor_rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Copies true state, output and the last measurement into a row.
void record_truth(TraceRow& row, const Twin& twin, const Eigen::Vector2d& y);
void record_estimate(TraceRow& row, const EstimateRecord& rec);

}  // namespace pamtwin
