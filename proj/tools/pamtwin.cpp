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

// pamtwin: command-line front end for the antagonistic PAM joint twin.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pamtwin/config.hpp"
#include "pamtwin/errors.hpp"
#include "pamtwin/pneumatics.hpp"
#include "pamtwin/runner.hpp"

namespace {

using namespace pamtwin;

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::string mode;
  std::vector<std::string> sets;
  bool timing = false;
};

RunConfig build_config(const CommonOptions& o) {
  RunConfig cfg;
  if (!o.config.empty()) cfg.load(o.config);
  for (const auto& s : o.sets) cfg.set(s);
  if (o.seed) cfg.set("seed", std::to_string(*o.seed));
  if (o.duration) cfg.duration = *o.duration;
  return cfg;
}

void stamp(Trace& trace, const CommonOptions& o, const RunConfig& cfg) {
  trace.add_metadata("params_hash", params_hash(cfg.plant()));
  trace.add_metadata("model_hash", params_hash(cfg.model()));
  trace.add_metadata("profile_seed", std::to_string(cfg.profile.seed));
  if (!o.config.empty()) trace.add_metadata("config", o.config);
  for (const auto& s : o.sets) trace.add_metadata("set", s);
}

void emit_trace(Trace& trace, const CommonOptions& o, const RunConfig& cfg) {
  stamp(trace, o, cfg);
  save_trace_csv(o.out.empty() ? "trace.csv" : o.out, trace, o.timing);
  if (!trace.complete) std::cerr << "warning: run incomplete: " << trace.failure << '\n';
}

int cmd_simulate(const CommonOptions& o) {
  const RunConfig cfg = build_config(o);
  if (!o.mode.empty() && o.mode != "open_loop") {
    throw ValidationError("simulate: unknown mode '" + o.mode + "'");
  }
  Trace trace = run(cfg.scenario(RunMode::kOpenLoop), cfg.plant(), cfg.model());
  emit_trace(trace, o, cfg);
  const auto span = check_pressure_span(cfg.scenario(RunMode::kOpenLoop).inputs,
                                        trace.rows.back().t, cfg.plant());
  std::cout << "rows = " << trace.rows.size() << '\n'
            << "pressure_min = " << format_double(span.min_pressure) << '\n'
            << "pressure_max = " << format_double(span.max_pressure) << '\n';
  if (!span.spans) std::cerr << "warning: profile does not span 250-650 kPa\n";
  return trace.complete ? 0 : 3;
}

int cmd_estimate(const CommonOptions& o) {
  const RunConfig cfg = build_config(o);
  const std::string mode = o.mode.empty() ? "offline" : o.mode;
  RunMode rm;
  if (mode == "offline") {
    rm = RunMode::kEstimateOffline;
  } else if (mode == "online") {
    rm = RunMode::kEstimateOnline;
  } else {
    throw ValidationError("estimate: mode must be offline or online");
  }
  const Scenario sc = cfg.scenario(rm);
  Trace trace = run(sc, cfg.plant(), cfg.model());
  emit_trace(trace, o, cfg);
  if (!trace.complete) return 3;
  write_metrics(std::cout, compare_offline(trace, cfg.model(), sc.estimator));
  return 0;
}

int cmd_control(const CommonOptions& o) {
  const RunConfig cfg = build_config(o);
  const std::string mode = o.mode.empty() ? "angle" : o.mode;
  LoopMode lm;
  if (mode == "angle") {
    lm = LoopMode::kAngle;
  } else if (mode == "torque") {
    lm = LoopMode::kTorque;
  } else {
    throw ValidationError("control: mode must be angle or torque");
  }
  const Scenario sc =
      cfg.scenario(lm == LoopMode::kAngle ? RunMode::kControlAngle : RunMode::kControlTorque);
  Trace trace = run(sc, cfg.plant(), cfg.model());
  emit_trace(trace, o, cfg);
  write_tracking(std::cout, steady_tracking_errors(trace, lm));
  return trace.complete ? 0 : 3;
}

int cmd_sweep(const CommonOptions& o, const std::string& param,
              const std::vector<double>& values, double u1, double u2) {
  const RunConfig cfg = build_config(o);
  const SweepReport report =
      sweep(parse_sweep_parameter(param), values, cfg.plant(), ControlInput(u1, u2));
  if (o.out.empty()) {
    write_sweep_csv(std::cout, report);
  } else {
    std::ofstream f(o.out);
    if (!f) throw ValidationError("cannot write " + o.out);
    write_sweep_csv(f, report);
  }
  if (!report.guideline_holds) std::cerr << "warning: guideline violated: " << report.guideline << '\n';
  return 0;
}

int cmd_calibrate(const CommonOptions& o, const std::string& data_path) {
  const RunConfig cfg = build_config(o);
  std::ifstream f(data_path);
  if (!f) throw ValidationError("cannot open calibration data: " + data_path);
  std::vector<SteadyPressureDatum> data;
  std::string line;
  while (std::getline(f, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    SteadyPressureDatum d{};
    if (!(ls >> d.u)) continue;
    if (!(ls >> d.pressure)) throw ValidationError("calibration data: missing pressure column");
    data.push_back(d);
  }
  const OpenRateMap map = calibrate_open_rate_map(data, cfg.plant());
  if (o.out.empty()) {
    map.write(std::cout);
  } else {
    map.save(o.out);
  }
  return 0;
}

int cmd_bench(const CommonOptions& o) {
  const RunConfig cfg = build_config(o);
  const BenchReport r = bench(cfg.scenario(RunMode::kBench), cfg.plant(), cfg.model());
  write_bench(std::cout, r);
  if (!r.within_budget) std::cerr << "warning: mean step cost exceeds the sampling period\n";
  return 0;
}

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config, "Configuration file (key = value)");
  app->add_option("--out", o.out, "Output path");
  app->add_option("--seed", o.seed, "Seed for the profile and the noise");
  app->add_option("--duration", o.duration, "Run length (s)");
  app->add_option("--mode", o.mode, "Sub-mode (offline|online, angle|torque)");
  app->add_option("--set", o.sets, "Override a setting: key=value (repeatable)");
  app->add_flag("--timing", o.timing, "Write the per-step cost column to the trace");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Antagonistic PAM joint twin: simulation, estimation and control"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string sweep_param;
  std::vector<double> sweep_values;
  double sweep_u1 = 5.5;
  double sweep_u2 = 5.5;
  std::string data_path;

  auto* simulate = app.add_subcommand("simulate", "Open-loop simulation to a trace CSV");
  auto* estimate = app.add_subcommand("estimate", "Simulate and estimate; print metrics");
  auto* control = app.add_subcommand("control", "Sensor-less closed-loop run");
  auto* sweep_cmd = app.add_subcommand("sweep", "Steady state and rise time per parameter value");
  auto* calibrate = app.add_subcommand("calibrate", "Fit the voltage to open-rate map");
  auto* bench_cmd = app.add_subcommand("bench", "Estimator step timing");
  for (auto* sub : {simulate, estimate, control, sweep_cmd, calibrate, bench_cmd}) {
    add_common(sub, opts);
  }
  sweep_cmd->add_option("--param", sweep_param, "Tp_coeff, mu_s, A_scale, k1 or k2")->required();
  sweep_cmd->add_option("--values", sweep_values, "Values to sweep")->required()->delimiter(',');
  sweep_cmd->add_option("--u1", sweep_u1, "Constant valve 1 command (V)");
  sweep_cmd->add_option("--u2", sweep_u2, "Constant valve 2 command (V)");
  calibrate->add_option("--data", data_path, "Two columns: u (V) and static pressure (Pa)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(opts);
    if (estimate->parsed()) return cmd_estimate(opts);
    if (control->parsed()) return cmd_control(opts);
    if (sweep_cmd->parsed()) return cmd_sweep(opts, sweep_param, sweep_values, sweep_u1, sweep_u2);
    if (calibrate->parsed()) return cmd_calibrate(opts, data_path);
    if (bench_cmd->parsed()) return cmd_bench(opts);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
