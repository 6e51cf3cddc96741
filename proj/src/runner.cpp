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

#include "pamtwin/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <numbers>
#include <numeric>
#include <ostream>

#include "pamtwin/errors.hpp"

namespace pamtwin {
namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

long sample_count(double duration, double sample_period) {
  return static_cast<long>(std::llround(duration / sample_period));
}

void add_run_metadata(Trace& trace, const Scenario& sc) {
  trace.add_metadata("mode", to_string(sc.mode));
  trace.add_metadata("noise_seed", std::to_string(sc.noise.seed));
  trace.add_metadata("process_noise", to_string(sc.noise.process));
  trace.add_metadata("measurement_noise", sc.noise.measurement ? "on" : "off");
}

Trace simulate_open_loop(const Scenario& sc, const PamParams& plant) {
  Twin twin(plant, sc.initial_state.value_or(default_initial_state(plant)), sc.noise);
  Trace trace;
  trace.sample_period = plant.sample_period;
  const long n = sample_count(sc.duration, plant.sample_period);
  trace.rows.reserve(static_cast<std::size_t>(n) + 1);
  ControlInput u;
  for (long k = 0; k <= n; ++k) {
    TraceRow row;
    row.t = static_cast<double>(k) * plant.sample_period;
    try {
      if (k > 0) twin.advance(u);
    } catch (const NumericalError& err) {
      trace.complete = false;
      trace.failure = err.what();
      break;
    }
    record_truth(row, twin, twin.measure());
    u = sc.inputs.at(row.t);
    row.u1 = u.u1();
    row.u2 = u.u2();
    trace.rows.push_back(row);
  }
  return trace;
}

Trace simulate_online(const Scenario& sc, const PamParams& plant, const PamParams& model) {
  Twin twin(plant, sc.initial_state.value_or(default_initial_state(plant)), sc.noise);
  PamEstimator estimator(model, sc.estimator);
  Trace trace;
  trace.sample_period = plant.sample_period;
  const long n = sample_count(sc.duration, plant.sample_period);
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
      const auto stop = std::chrono::steady_clock::now();
      if (k > 0) row.step_cost = std::chrono::duration<double>(stop - start).count();
      record_estimate(row, rec);
    } catch (const NumericalError& err) {
      trace.complete = false;
      trace.failure = err.what();
      break;
    }
    u = sc.inputs.at(row.t);
    row.u1 = u.u1();
    row.u2 = u.u2();
    trace.rows.push_back(row);
  }
  return trace;
}

std::vector<double> difference(const std::vector<double>& a, const std::vector<double>& b,
                               double scale) {
  std::vector<double> z(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) z[i] = (a[i] - b[i]) * scale;
  return z;
}

std::vector<double> scaled(std::vector<double> v, double scale) {
  for (double& x : v) x *= scale;
  return v;
}

bool is_flat(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return !(*hi > *lo);
}

}  // namespace

void Scenario::validate() const {
  if (!(duration > 0.0)) throw ValidationError("scenario: duration must be positive");
  const bool control = mode == RunMode::kControlAngle || mode == RunMode::kControlTorque;
  if (control && reference.empty()) throw ValidationError("scenario: control mode needs a reference");
  if (!control && mode != RunMode::kSweep && mode != RunMode::kCalibrate && inputs.empty()) {
    throw ValidationError("scenario: run needs an input schedule");
  }
}

Trace run(const Scenario& sc, const PamParams& plant, const PamParams& model) {
  sc.validate();
  plant.validate();
  model.validate();
  Trace trace;
  switch (sc.mode) {
    case RunMode::kOpenLoop:
      trace = simulate_open_loop(sc, plant);
      break;
    case RunMode::kEstimateOffline:
      trace = simulate_open_loop(sc, plant);
      attach_estimates(trace, model, sc.estimator);
      break;
    case RunMode::kEstimateOnline:
    case RunMode::kBench:
      trace = simulate_online(sc, plant, model);
      break;
    case RunMode::kControlAngle:
    case RunMode::kControlTorque: {
      ClosedLoopSpec spec;
      spec.mode = sc.mode == RunMode::kControlAngle ? LoopMode::kAngle : LoopMode::kTorque;
      spec.reference = sc.reference;
      spec.duration = sc.duration;
      spec.plant = plant;
      spec.model = model;
      spec.noise = sc.noise;
      spec.estimator = sc.estimator;
      spec.controller =
          sc.controller.value_or(PiController::for_mode(spec.mode, plant.sample_period));
      spec.units = sc.units;
      spec.initial_state = sc.initial_state;
      trace = run_sensorless_loop(spec);
      break;
    }
    case RunMode::kSweep:
    case RunMode::kCalibrate:
      throw ValidationError("scenario: mode " + to_string(sc.mode) + " does not produce a trace");
  }
  add_run_metadata(trace, sc);
  return trace;
}

void attach_estimates(Trace& trace, const PamParams& model, const EstimatorConfig& config) {
  PamEstimator estimator(model, config);
  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    TraceRow& row = trace.rows[k];
    try {
      if (k == 0) {
        record_estimate(row, estimator.current());
        continue;
      }
      const TraceRow& prev = trace.rows[k - 1];
      const auto start = std::chrono::steady_clock::now();
      const EstimateRecord& rec =
          estimator.step(ControlInput(prev.u1, prev.u2), Eigen::Vector2d(row.y1, row.y2));
      row.step_cost =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      record_estimate(row, rec);
    } catch (const NumericalError& err) {
      trace.complete = false;
      trace.failure = std::string("estimator: ") + err.what();
      trace.rows.resize(k);
      return;
    }
  }
}

OfflineComparison compare_offline(const Trace& trace, const PamParams& model,
                                  const EstimatorConfig& config) {
  if (trace.rows.size() < 2) throw ValidationError("compare_offline: trace too short");
  for (const auto& r : trace.rows) {
    if (std::isnan(r.y1) || std::isnan(r.y2) || std::isnan(r.u1) || std::isnan(r.u2)) {
      throw ValidationError("compare_offline: trace lacks inputs or measured pressures");
    }
  }

  // Model only, driven by u alone.
  std::vector<double> psi_model(trace.rows.size());
  std::vector<double> tau_model(trace.rows.size());
  JointState x = config.initial_state.value_or(default_initial_state(model));
  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    if (k > 0) {
      const auto& prev = trace.rows[k - 1];
      x = step_with_end_stops(x, ControlInput(prev.u1, prev.u2), model);
    }
    const PlantOutput out = output(x, model);
    psi_model[k] = out.psi;
    tau_model[k] = out.tau;
  }

  Trace replay = trace;
  attach_estimates(replay, model, config);
  if (!replay.complete) throw NumericalError(replay.failure);

  const auto psi = trace.column(&TraceRow::psi);
  const auto tau = trace.column(&TraceRow::tau);
  OfflineComparison result;
  if (!is_flat(psi)) {
    const auto xi = scaled(psi, kDeg);
    result.psi = SignalComparison{
        compute_metrics(difference(psi_model, psi, kDeg), xi),
        compute_metrics(difference(replay.column(&TraceRow::psi_hat), psi, kDeg), xi)};
  }
  if (!is_flat(tau)) {
    result.tau = SignalComparison{
        compute_metrics(difference(tau_model, tau, 1.0), tau),
        compute_metrics(difference(replay.column(&TraceRow::tau_hat), tau, 1.0), tau)};
  }
  return result;
}

void write_metrics(std::ostream& out, const OfflineComparison& c) {
  const auto emit = [&out](const char* signal, const char* method, const Metrics& m) {
    out << signal << '.' << method << ".rmse = " << format_double(m.rmse) << '\n'
        << signal << '.' << method << ".linf = " << format_double(m.linf) << '\n'
        << signal << '.' << method << ".ratio = " << format_double(m.ratio) << '\n';
  };
  if (c.psi) {
    emit("psi_deg", "model", c.psi->model_only);
    emit("psi_deg", "ukf", c.psi->ukf);
  }
  if (c.tau) {
    emit("tau", "model", c.tau->model_only);
    emit("tau", "ukf", c.tau->ukf);
  }
}

std::vector<SegmentError> steady_tracking_errors(const Trace& trace, LoopMode mode,
                                                 double window) {
  const double scale = mode == LoopMode::kAngle ? kDeg : 1.0;
  std::vector<SegmentError> out;
  std::size_t begin = 0;
  while (begin < trace.rows.size()) {
    std::size_t end = begin;
    while (end < trace.rows.size() && trace.rows[end].reference == trace.rows[begin].reference) {
      ++end;
    }
    SegmentError seg;
    seg.t_start = trace.rows[begin].t;
    seg.t_end = trace.rows[end - 1].t;
    seg.reference = trace.rows[begin].reference * scale;
    // A segment shorter than the window has no steady tail to report.
    if (seg.t_end - seg.t_start < window) {
      begin = end;
      continue;
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t k = begin; k < end; ++k) {
      const TraceRow& r = trace.rows[k];
      if (r.t < seg.t_end - window) continue;
      const double actual = mode == LoopMode::kAngle ? r.psi : r.tau;
      const double e = (r.reference - actual) * scale;
      sum += e;
      ++count;
      seg.max_abs_error = std::max(seg.max_abs_error, std::abs(e));
    }
    seg.mean_error = count ? sum / static_cast<double>(count) : 0.0;
    out.push_back(seg);
    begin = end;
  }
  return out;
}

void write_tracking(std::ostream& out, const std::vector<SegmentError>& segments) {
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    const std::string p = "segment" + std::to_string(i);
    out << p << ".t_start = " << format_double(s.t_start) << '\n'
        << p << ".reference = " << format_double(s.reference) << '\n'
        << p << ".mean_error = " << format_double(s.mean_error) << '\n'
        << p << ".max_abs_error = " << format_double(s.max_abs_error) << '\n';
  }
}

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "Tp_coeff") return SweepParameter::kTubeCoulomb;
  if (name == "mu_s") return SweepParameter::kShaftCoulomb;
  if (name == "A_scale") return SweepParameter::kAreaScale;
  if (name == "k1") return SweepParameter::kK1;
  if (name == "k2") return SweepParameter::kK2;
  throw ValidationError("unknown sweep parameter: " + name);
}

std::string to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::kTubeCoulomb:
      return "Tp_coeff";
    case SweepParameter::kShaftCoulomb:
      return "mu_s";
    case SweepParameter::kAreaScale:
      return "A_scale";
    case SweepParameter::kK1:
      return "k1";
    case SweepParameter::kK2:
      return "k2";
  }
  return "unknown";
}

PamParams with_sweep_value(const PamParams& base, SweepParameter parameter, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError("sweep values must be positive");
  }
  PamParams p = base;
  switch (parameter) {
    case SweepParameter::kTubeCoulomb:
      p.tube_coulomb_coeff = value;
      break;
    case SweepParameter::kShaftCoulomb:
      p.shaft_coulomb_coeff = value;
      break;
    case SweepParameter::kAreaScale:
      for (auto& a : p.orifice) {
        a.inflow *= value;
        a.outflow *= value;
      }
      break;
    case SweepParameter::kK1:
      p.polytropic_flow = value;
      break;
    case SweepParameter::kK2:
      p.polytropic_volume = value;
      break;
  }
  p.validate();
  return p;
}

SweepReport sweep(SweepParameter parameter, std::span<const double> values,
                  const PamParams& base, const ControlInput& u,
                  const SteadyStateOptions& options) {
  if (values.empty()) throw ValidationError("sweep needs at least one value");
  std::vector<PamParams> configs;
  configs.reserve(values.size());
  for (double v : values) configs.push_back(with_sweep_value(base, parameter, v));

  std::vector<std::future<SweepRow>> jobs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      SweepRow row;
      row.value = values[i];
      try {
        const SteadyState ss = steady_state(u, configs[i], options);
        row.psi = ss.psi;
        row.p1 = ss.p1;
        row.p2 = ss.p2;
        row.settle_time = ss.settle_time;
        row.rise_time1 = pressure_rise_time(u, Side::kFirst, configs[i], options.timeout);
        row.rise_time2 = pressure_rise_time(u, Side::kSecond, configs[i], options.timeout);
        row.converged = true;
      } catch (const NumericalError& err) {
        row.error = err.what();
      }
      return row;
    }));
  }

  SweepReport report{parameter, u, {}, true, {}};
  for (auto& j : jobs) report.rows.push_back(j.get());

  std::vector<const SweepRow*> ok;
  for (const auto& r : report.rows) {
    if (r.converged) ok.push_back(&r);
  }
  std::sort(ok.begin(), ok.end(), [](auto* a, auto* b) { return a->value < b->value; });
  for (std::size_t i = 1; i < ok.size(); ++i) {
    const SweepRow& a = *ok[i - 1];
    const SweepRow& b = *ok[i];
    switch (parameter) {
      case SweepParameter::kTubeCoulomb:
      case SweepParameter::kShaftCoulomb:
        if (std::abs(b.psi) > std::abs(a.psi)) report.guideline_holds = false;
        break;
      case SweepParameter::kAreaScale:
      case SweepParameter::kK1:
        if (!(b.rise_time1 < a.rise_time1 && b.rise_time2 < a.rise_time2)) {
          report.guideline_holds = false;
        }
        break;
      case SweepParameter::kK2:
        break;
    }
  }
  switch (parameter) {
    case SweepParameter::kTubeCoulomb:
    case SweepParameter::kShaftCoulomb:
      report.guideline = "steady |psi| non-increasing";
      break;
    case SweepParameter::kAreaScale:
    case SweepParameter::kK1:
      report.guideline = "rise time strictly decreasing";
      break;
    case SweepParameter::kK2:
      report.guideline = "none";
      break;
  }
  return report;
}

void write_sweep_csv(std::ostream& out, const SweepReport& r) {
  out << "# parameter: " << to_string(r.parameter) << '\n'
      << "# u1: " << format_double(r.input.u1()) << '\n'
      << "# u2: " << format_double(r.input.u2()) << '\n'
      << "# guideline: " << r.guideline << '\n'
      << "# guideline_holds: " << (r.guideline_holds ? "true" : "false") << '\n'
      << "value,converged,psi,p1,p2,settle_time,rise_time1,rise_time2,error\n";
  for (const auto& row : r.rows) {
    out << format_double(row.value) << ',' << (row.converged ? 1 : 0) << ','
        << format_double(row.psi) << ',' << format_double(row.p1) << ','
        << format_double(row.p2) << ',' << format_double(row.settle_time) << ','
        << format_double(row.rise_time1) << ',' << format_double(row.rise_time2) << ','
        << row.error << '\n';
  }
}

BenchReport bench_report(std::span<const double> costs, double budget) {
  BenchReport r;
  r.budget = budget;
  std::vector<double> c;
  for (double v : costs) {
    if (!std::isnan(v)) c.push_back(v);
  }
  r.samples = c.size();
  if (c.empty()) return r;
  std::sort(c.begin(), c.end());
  r.mean = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
  const auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(c.size())));
  r.p99 = c[std::max<std::size_t>(rank, 1) - 1];
  r.max = c.back();
  r.within_budget = r.mean < budget;
  return r;
}

BenchReport bench(const Scenario& scenario, const PamParams& plant, const PamParams& model) {
  Scenario sc = scenario;
  sc.mode = RunMode::kEstimateOnline;
  const Trace trace = run(sc, plant, model);
  return bench_report(trace.column(&TraceRow::step_cost), plant.sample_period);
}

void write_bench(std::ostream& out, const BenchReport& r) {
  out << "samples = " << r.samples << '\n'
      << "mean_s = " << format_double(r.mean) << '\n'
      << "p99_s = " << format_double(r.p99) << '\n'
      << "max_s = " << format_double(r.max) << '\n'
      << "budget_s = " << format_double(r.budget) << '\n'
      << "within_budget = " << (r.within_budget ? "true" : "false") << '\n';
}

}  // namespace pamtwin
