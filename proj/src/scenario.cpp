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

#include "pamtwin/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>

#include "pamtwin/errors.hpp"
#include "pamtwin/pneumatics.hpp"

namespace pamtwin {
namespace {

constexpr std::pair<RunMode, const char*> kModeNames[] = {
    {RunMode::kOpenLoop, "open_loop"},
    {RunMode::kEstimateOffline, "estimate_offline"},
    {RunMode::kEstimateOnline, "estimate_online"},
    {RunMode::kControlAngle, "control_angle"},
    {RunMode::kControlTorque, "control_torque"},
    {RunMode::kSweep, "sweep"},
    {RunMode::kCalibrate, "calibrate"},
    {RunMode::kBench, "bench"},
};

template <typename Step>
void check_times(const std::vector<Step>& steps, const char* what) {
  if (steps.empty()) return;
  if (steps.front().t != 0.0) {
    throw ValidationError(std::string(what) + ": first step must start at t = 0");
  }
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (!(steps[i].t > steps[i - 1].t)) {
      throw ValidationError(std::string(what) + ": step times must strictly increase");
    }
  }
}

template <typename Step>
const Step& active_step(const std::vector<Step>& steps, double t) {
  auto it = std::upper_bound(steps.begin(), steps.end(), t,
                             [](double time, const Step& s) { return time < s.t; });
  return it == steps.begin() ? steps.front() : *std::prev(it);
}

}  // namespace

RunMode parse_run_mode(const std::string& name) {
  for (const auto& [mode, n] : kModeNames) {
    if (name == n) return mode;
  }
  throw ValidationError("unknown run mode: " + name);
}

std::string to_string(RunMode mode) {
  for (const auto& [m, n] : kModeNames) {
    if (m == mode) return n;
  }
  return "unknown";
}

InputSchedule::InputSchedule(std::vector<InputStep> steps) : steps_(std::move(steps)) {
  check_times(steps_, "input schedule");
  for (const auto& s : steps_) {
    const bool ok = s.u1 >= ControlInput::kMin && s.u1 <= ControlInput::kMax &&
                    s.u2 >= ControlInput::kMin && s.u2 <= ControlInput::kMax;
    if (!ok) throw ValidationError("input schedule: voltage outside [0, 10] V");
  }
}

ControlInput InputSchedule::at(double t) const {
  if (steps_.empty()) return {};
  const auto& s = active_step(steps_, t);
  return {s.u1, s.u2};
}

ReferenceSchedule::ReferenceSchedule(std::vector<ReferenceStep> steps)
    : steps_(std::move(steps)) {
  check_times(steps_, "reference schedule");
  for (const auto& s : steps_) {
    if (!std::isfinite(s.value)) throw ValidationError("reference schedule: non-finite value");
  }
}

double ReferenceSchedule::at(double t) const {
  if (steps_.empty()) return 0.0;
  return active_step(steps_, t).value;
}

InputSchedule generate_profile(const ProfileSpec& spec, const PamParams& params) {
  switch (spec.kind) {
    case ProfileSpec::Kind::kConstant:
      return InputSchedule({{0.0, spec.constant.u1(), spec.constant.u2()}});
    case ProfileSpec::Kind::kSteps:
      return InputSchedule(spec.steps);
    case ProfileSpec::Kind::kRandom:
      break;
  }
  if (!(spec.duration > 0.0)) throw ValidationError("profile: duration must be positive");
  if (!(spec.dwell_min > 0.0 && spec.dwell_max >= spec.dwell_min)) {
    throw ValidationError("profile: need 0 < dwell_min <= dwell_max");
  }
  if (!(spec.u_low >= ControlInput::kMin && spec.u_high <= ControlInput::kMax &&
        spec.u_low < spec.u_high)) {
    throw ValidationError("profile: need 0 <= u_low < u_high <= 10");
  }

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> level(spec.u_low, spec.u_high);
  std::uniform_real_distribution<double> dwell(spec.dwell_min, spec.dwell_max);

  std::uniform_real_distribution<double> target(-spec.angle_limit, spec.angle_limit);

  // Friction-free static angle of a level pair, if it is admissible.
  const auto static_angle = [&](double u1, double u2) -> std::optional<double> {
    try {
      const double p1 = steady_pressure_for_input(u1, Side::kFirst, params);
      const double p2 = steady_pressure_for_input(u2, Side::kSecond, params);
      const double psi = equilibrium_angle(p1, p2, params);
      if (std::abs(psi) <= spec.angle_limit) return psi;
    } catch (const ModelDomainError&) {
    }
    return std::nullopt;
  };

  // Each segment aims at a uniformly drawn static angle and keeps the
  // closest of a batch of random admissible level pairs, so the joint
  // visits the whole admissible range instead of clustering near the
  // equal-pressure angle.
  constexpr int kCandidates = 32;
  std::vector<InputStep> steps;
  double t = 0.0;
  while (t < spec.duration) {
    const double aim = target(rng);
    double best_gap = std::numeric_limits<double>::infinity();
    InputStep best{t, 0.0, 0.0};
    int found = 0;
    for (int tries = 0; found < kCandidates; ++tries) {
      if (tries > 1000 * kCandidates) {
        throw ValidationError("profile: no admissible level pair in the voltage range");
      }
      const double u1 = level(rng);
      const double u2 = level(rng);
      const auto psi = static_angle(u1, u2);
      if (!psi) continue;
      ++found;
      if (std::abs(*psi - aim) < best_gap) {
        best_gap = std::abs(*psi - aim);
        best = {t, u1, u2};
      }
    }
    steps.push_back(best);
    t += dwell(rng);
  }
  return InputSchedule(std::move(steps));
}

PressureSpan check_pressure_span(const InputSchedule& schedule, double duration,
                                 const PamParams& params, double low, double high) {
  JointState x = default_initial_state(params);
  PressureSpan span{std::min(x.p1, x.p2), std::max(x.p1, x.p2), false};
  const auto n = static_cast<long>(std::llround(duration / params.sample_period));
  for (long k = 0; k < n; ++k) {
    x = step_with_end_stops(x, schedule.at(static_cast<double>(k) * params.sample_period), params);
    span.min_pressure = std::min({span.min_pressure, x.p1, x.p2});
    span.max_pressure = std::max({span.max_pressure, x.p1, x.p2});
  }
  span.spans = span.min_pressure <= low && span.max_pressure >= high;
  return span;
}

ProcessNoiseMode parse_process_noise(const std::string& name) {
  if (name == "none") return ProcessNoiseMode::kNone;
  if (name == "scaled") return ProcessNoiseMode::kScaled;
  if (name == "strict") return ProcessNoiseMode::kStrict;
  throw ValidationError("unknown process noise mode: " + name);
}

std::string to_string(ProcessNoiseMode mode) {
  switch (mode) {
    case ProcessNoiseMode::kNone:
      return "none";
    case ProcessNoiseMode::kScaled:
      return "scaled";
    case ProcessNoiseMode::kStrict:
      return "strict";
  }
  return "unknown";
}

NoiseSettings NoiseSettings::noiseless() {
  NoiseSettings n;
  n.process = ProcessNoiseMode::kNone;
  n.measurement = false;
  return n;
}

Twin::Twin(PamParams params, const JointState& initial, const NoiseSettings& noise)
    : params_(std::move(params)),
      noise_(noise),
      state_(initial),
      process_rng_(noise.seed),
      sensor_rng_(noise.seed ^ 0x9e3779b97f4a7c15ULL) {
  params_.validate();
  if ((noise_.process_cov_diag.array() < 0.0).any() ||
      (noise_.measurement_cov_diag.array() < 0.0).any()) {
    throw ValidationError("noise covariances must be non-negative");
  }
}

Eigen::Vector2d Twin::measure() {
  Eigen::Vector2d y{state_.p1, state_.p2};
  if (noise_.measurement) {
    for (int i = 0; i < 2; ++i) {
      y[i] += std::sqrt(noise_.measurement_cov_diag[i]) * normal_(sensor_rng_);
    }
  }
  return y;
}

void Twin::advance(const ControlInput& u) {
  state_ = step_with_end_stops(state_, u, params_);
  if (noise_.process == ProcessNoiseMode::kNone) return;

  const double scale =
      noise_.process == ProcessNoiseMode::kScaled ? params_.sample_period : 1.0;
  Eigen::Vector4d x = state_.to_vector();
  for (int i = 0; i < 4; ++i) {
    x[i] += std::sqrt(noise_.process_cov_diag[i] * scale) * normal_(process_rng_);
  }
  x[2] = std::clamp(x[2], params_.atm_pressure, params_.tank_pressure);
  x[3] = std::clamp(x[3], params_.atm_pressure, params_.tank_pressure);
  if (params_.locked_joint) x[0] = x[1] = 0.0;
  state_ = apply_end_stops(JointState::from_vector(x), params_);
}

void record_truth(TraceRow& row, const Twin& twin, const Eigen::Vector2d& y) {
  const auto& x = twin.state();
  row.psi = x.psi;
  row.psi_dot = x.psi_dot;
  row.p1 = x.p1;
  row.p2 = x.p2;
  row.tau = twin.truth().tau;
  row.y1 = y[0];
  row.y2 = y[1];
}

void record_estimate(TraceRow& row, const EstimateRecord& rec) {
  row.psi_hat = rec.psi_hat;
  row.psi_dot_hat = rec.psi_dot_hat;
  row.p1_hat = rec.p1_hat;
  row.p2_hat = rec.p2_hat;
  row.f1_hat = rec.f1_hat;
  row.f2_hat = rec.f2_hat;
  row.tau_hat = rec.tau_hat;
  row.rejected = rec.rejected ? 1.0 : 0.0;
}

}  // namespace pamtwin
