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

// End-to-end experiment execution on the simulated rig.

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pamtwin/control.hpp"
#include "pamtwin/estimator.hpp"
#include "pamtwin/metrics.hpp"
#include "pamtwin/params.hpp"
#include "pamtwin/plant.hpp"
#include "pamtwin/scenario.hpp"
#include "pamtwin/trace.hpp"

namespace pamtwin {

struct Scenario {
  RunMode mode = RunMode::kEstimateOffline;
  double duration = 130.0;
  InputSchedule inputs;         ///< open-loop and estimation modes
  ReferenceSchedule reference;  ///< control modes
  NoiseSettings noise;
  EstimatorConfig estimator;
  /// Control modes; PiController::for_mode() when empty.
  std::optional<PiController> controller;
  ErrorUnits units = ErrorUnits::kDegrees;
  /// Initial true state; default_initial_state(plant) when empty.
  std::optional<JointState> initial_state;

  void validate() const;
};

/// Runs a trace-producing mode (open loop, estimation, control, bench).
/// `plant` drives the simulated rig and `model` the estimator. The trace
/// has duration / T_stp + 1 rows unless a numerical failure cut it short.
Trace run(const Scenario& scenario, const PamParams& plant, const PamParams& model);

/// Runs the estimator over the measured pressures already in `trace` and
/// fills the estimate and step_cost columns.
void attach_estimates(Trace& trace, const PamParams& model, const EstimatorConfig& config);

struct SignalComparison {
  Metrics model_only;
  Metrics ukf;
};

/// Angle metrics are in degrees, torque metrics in N m. The angle entry is
/// empty when the true angle never moves (locked joint).
struct OfflineComparison {
  std::optional<SignalComparison> psi;
  std::optional<SignalComparison> tau;
};

/// Replays the trace's inputs through the model alone and through the UKF
/// fed with the trace's measured pressures, both scored against the true
/// columns.
OfflineComparison compare_offline(const Trace& trace, const PamParams& model,
                                  const EstimatorConfig& config);

void write_metrics(std::ostream& out, const OfflineComparison& comparison);

/// Tracking error over the tail of one constant-reference segment.
/// Errors are reference minus truth, in degrees for angle loops. Segments
/// shorter than the window are skipped.
struct SegmentError {
  double t_start = 0.0;
  double t_end = 0.0;
  double reference = 0.0;  ///< deg or N m
  double mean_error = 0.0;  ///< over the last `window` seconds
  double max_abs_error = 0.0;
};

std::vector<SegmentError> steady_tracking_errors(const Trace& trace, LoopMode mode,
                                                 double window = 1.0);

void write_tracking(std::ostream& out, const std::vector<SegmentError>& segments);

enum class SweepParameter { kTubeCoulomb, kShaftCoulomb, kAreaScale, kK1, kK2 };

/// Names: Tp_coeff, mu_s, A_scale, k1, k2.
SweepParameter parse_sweep_parameter(const std::string& name);
std::string to_string(SweepParameter parameter);

/// Copy of `base` with the swept value applied. A_scale multiplies all four
/// orifice areas; the other parameters are set directly.
PamParams with_sweep_value(const PamParams& base, SweepParameter parameter, double value);

struct SweepRow {
  double value = 0.0;
  bool converged = false;
  double psi = kNotAvailable;  ///< steady angle (rad)
  double p1 = kNotAvailable;
  double p2 = kNotAvailable;
  double settle_time = kNotAvailable;
  double rise_time1 = kNotAvailable;  ///< 90% pressure rise time, PAM1 (s)
  double rise_time2 = kNotAvailable;
  std::string error;
};

struct SweepReport {
  SweepParameter parameter;
  ControlInput input;
  std::vector<SweepRow> rows;  ///< in the order the values were given
  /// Expected direction: |psi| non-increasing in Tp_coeff and mu_s, rise
  /// times strictly decreasing in A_scale and k1. Always true for k2.
  bool guideline_holds = true;
  std::string guideline;
};

/// Steady state and rise time per value under constant u from vented rest.
/// Runs are independent and executed concurrently.
SweepReport sweep(SweepParameter parameter, std::span<const double> values,
                  const PamParams& base, const ControlInput& u,
                  const SteadyStateOptions& options = {});

void write_sweep_csv(std::ostream& out, const SweepReport& report);

struct BenchReport {
  std::size_t samples = 0;
  double mean = 0.0;
  double p99 = 0.0;
  double max = 0.0;
  double budget = 1e-3;
  bool within_budget = false;  ///< mean < budget
};

/// Summary of per-step costs (s). p99 is the nearest-rank percentile.
BenchReport bench_report(std::span<const double> costs, double budget = 1e-3);

/// Runs the scenario as online estimation and summarizes the step costs.
BenchReport bench(const Scenario& scenario, const PamParams& plant, const PamParams& model);

void write_bench(std::ostream& out, const BenchReport& report);

}  // namespace pamtwin
