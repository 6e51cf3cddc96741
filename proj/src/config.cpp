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

#include "pamtwin/config.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pamtwin/errors.hpp"
#include "pamtwin/trace.hpp"

namespace pamtwin {
namespace {

using Accessor = double& (*)(PamParams&);

struct ParamKey {
  const char* name;
  Accessor get;
};

// clang-format off
constexpr std::array<ParamKey, 36> kParamKeys = {{
    {"r_p", [](PamParams& p) -> double& { return p.shaft_radius; }},
    {"r", [](PamParams& p) -> double& { return p.seesaw_radius; }},
    {"L0", [](PamParams& p) -> double& { return p.neutral_length; }},
    {"M", [](PamParams& p) -> double& { return p.seesaw_mass; }},
    {"g", [](PamParams& p) -> double& { return p.gravity; }},
    {"P_tank", [](PamParams& p) -> double& { return p.tank_pressure; }},
    {"P_out", [](PamParams& p) -> double& { return p.atm_pressure; }},
    {"k", [](PamParams& p) -> double& { return p.heat_ratio; }},
    {"R", [](PamParams& p) -> double& { return p.gas_constant; }},
    {"T", [](PamParams& p) -> double& { return p.temperature; }},
    {"J", [](PamParams& p) -> double& { return p.inertia; }},
    {"k_s", [](PamParams& p) -> double& { return p.static_torque_coeff; }},
    {"c_s", [](PamParams& p) -> double& { return p.viscous_coeff; }},
    {"D1", [](PamParams& p) -> double& { return p.vol_d1; }},
    {"D2", [](PamParams& p) -> double& { return p.vol_d2; }},
    {"D3", [](PamParams& p) -> double& { return p.vol_d3; }},
    {"p_v11", [](PamParams& p) -> double& { return p.force[0].v1; }},
    {"p_v21", [](PamParams& p) -> double& { return p.force[0].v2; }},
    {"p_w11", [](PamParams& p) -> double& { return p.force[0].w1; }},
    {"p_w21", [](PamParams& p) -> double& { return p.force[0].w2; }},
    {"p_v12", [](PamParams& p) -> double& { return p.force[1].v1; }},
    {"p_v22", [](PamParams& p) -> double& { return p.force[1].v2; }},
    {"p_w12", [](PamParams& p) -> double& { return p.force[1].w1; }},
    {"p_w22", [](PamParams& p) -> double& { return p.force[1].w2; }},
    {"A_11", [](PamParams& p) -> double& { return p.orifice[0].inflow; }},
    {"A_21", [](PamParams& p) -> double& { return p.orifice[0].outflow; }},
    {"A_12", [](PamParams& p) -> double& { return p.orifice[1].inflow; }},
    {"A_22", [](PamParams& p) -> double& { return p.orifice[1].outflow; }},
    {"k1", [](PamParams& p) -> double& { return p.polytropic_flow; }},
    {"k2", [](PamParams& p) -> double& { return p.polytropic_volume; }},
    {"Tp_coeff", [](PamParams& p) -> double& { return p.tube_coulomb_coeff; }},
    {"mu_s", [](PamParams& p) -> double& { return p.shaft_coulomb_coeff; }},
    {"T_stp", [](PamParams& p) -> double& { return p.sample_period; }},
    {"l_min", [](PamParams& p) -> double& { return p.min_length; }},
    {"l_max", [](PamParams& p) -> double& { return p.max_length; }},
    {"pressure_floor_margin", [](PamParams& p) -> double& { return p.pressure_floor_margin; }},
}};
// clang-format on

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw ValidationError("config: bad number '" + text + "' for " + key);
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end) {
    throw ValidationError("config: bad integer '" + text + "' for " + key);
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s == "true" || s == "on" || s == "1") return true;
  if (s == "false" || s == "off" || s == "0") return false;
  throw ValidationError("config: bad boolean '" + text + "' for " + key);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

template <int N>
Eigen::Matrix<double, N, 1> parse_vector(const std::string& key, const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != N) {
    throw ValidationError("config: " + key + " needs " + std::to_string(N) + " values");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) v[i] = parse_number(key, parts[static_cast<std::size_t>(i)]);
  return v;
}

// "u:alpha,u:alpha,..." inline, anything else is a file path.
OpenRateMap parse_map(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  if (s.find(':') == std::string::npos) return OpenRateMap::load(s);
  std::vector<OpenRatePoint> points;
  for (const auto& item : split(s, ',')) {
    const auto pair = split(item, ':');
    if (pair.size() != 2) throw ValidationError("config: bad map point '" + item + "' for " + key);
    points.push_back({parse_number(key, pair[0]), parse_number(key, pair[1])});
  }
  return OpenRateMap(std::move(points));
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

bool is_param_key(const std::string& key) {
  for (const auto& k : kParamKeys) {
    if (key == k.name) return true;
  }
  return key == "rk4_substeps" || key == "locked_joint" || key == "kappa_map_1" ||
         key == "kappa_map_2";
}

void set_param(PamParams& params, const std::string& key, const std::string& value) {
  for (const auto& k : kParamKeys) {
    if (key == k.name) {
      k.get(params) = parse_number(key, value);
      return;
    }
  }
  if (key == "rk4_substeps") {
    params.rk4_substeps = static_cast<int>(parse_unsigned(key, value));
  } else if (key == "locked_joint") {
    params.locked_joint = parse_bool(key, value);
  } else if (key == "kappa_map_1") {
    params.open_rate[0] = parse_map(key, value);
  } else if (key == "kappa_map_2") {
    params.open_rate[1] = parse_map(key, value);
  } else {
    throw ValidationError("config: unknown key '" + key + "'");
  }
}

void write_params(std::ostream& out, const PamParams& params) {
  PamParams p = params;
  for (const auto& k : kParamKeys) out << k.name << " = " << format_double(k.get(p)) << '\n';
  out << "rk4_substeps = " << p.rk4_substeps << '\n';
  out << "locked_joint = " << (p.locked_joint ? "true" : "false") << '\n';
  for (int i = 0; i < 2; ++i) {
    std::vector<std::string> pts;
    for (const auto& pt : p.open_rate[static_cast<std::size_t>(i)].points()) {
      pts.push_back(format_double(pt.u) + ":" + format_double(pt.alpha));
    }
    out << "kappa_map_" << (i + 1) << " = " << join(pts, ',') << '\n';
  }
}

std::string params_hash(const PamParams& params) {
  std::ostringstream text;
  write_params(text, params);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void RunConfig::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ValidationError("config: expected key=value, got '" + assignment + "'");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (is_param_key(key)) {
    PamParams probe;
    set_param(probe, key, value);  // fail early on malformed values
    plant_settings_.emplace_back(key, value);
    return;
  }
  if (key.starts_with("est.")) {
    const std::string inner = key.substr(4);
    if (!is_param_key(inner)) throw ValidationError("config: unknown key '" + key + "'");
    PamParams probe;
    set_param(probe, inner, value);
    model_settings_.emplace_back(inner, value);
    return;
  }

  if (key == "duration") {
    duration = parse_number(key, value);
    if (!(*duration > 0.0)) throw ValidationError("config: duration must be positive");
  } else if (key == "seed") {
    profile.seed = noise.seed = parse_unsigned(key, value);
  } else if (key == "reference") {
    reference.clear();
    for (const auto& item : split(value, ',')) {
      const auto pair = split(item, ':');
      if (pair.size() != 2) throw ValidationError("config: bad reference step '" + item + "'");
      reference.push_back({parse_number(key, pair[0]), parse_number(key, pair[1])});
    }
    ReferenceSchedule check(reference);
  } else if (key == "profile") {
    const std::string v = trim(value);
    if (v == "random") {
      profile.kind = ProfileSpec::Kind::kRandom;
    } else if (v == "constant") {
      profile.kind = ProfileSpec::Kind::kConstant;
    } else if (v == "steps") {
      profile.kind = ProfileSpec::Kind::kSteps;
    } else {
      throw ValidationError("config: unknown profile kind '" + v + "'");
    }
  } else if (key == "profile.seed") {
    profile.seed = parse_unsigned(key, value);
  } else if (key == "profile.u1") {
    profile.constant = ControlInput(parse_number(key, value), profile.constant.u2());
  } else if (key == "profile.u2") {
    profile.constant = ControlInput(profile.constant.u1(), parse_number(key, value));
  } else if (key == "profile.u_low") {
    profile.u_low = parse_number(key, value);
  } else if (key == "profile.u_high") {
    profile.u_high = parse_number(key, value);
  } else if (key == "profile.dwell_min") {
    profile.dwell_min = parse_number(key, value);
  } else if (key == "profile.dwell_max") {
    profile.dwell_max = parse_number(key, value);
  } else if (key == "profile.angle_limit_deg") {
    profile.angle_limit = parse_number(key, value) * std::numbers::pi / 180.0;
  } else if (key == "profile.steps") {
    profile.steps.clear();
    for (const auto& item : split(value, ',')) {
      const auto parts = split(item, ':');
      if (parts.size() != 3) throw ValidationError("config: bad input step '" + item + "'");
      profile.steps.push_back({parse_number(key, parts[0]), parse_number(key, parts[1]),
                               parse_number(key, parts[2])});
    }
    InputSchedule check(profile.steps);
  } else if (key == "noise.seed") {
    noise.seed = parse_unsigned(key, value);
  } else if (key == "noise.process") {
    noise.process = parse_process_noise(trim(value));
  } else if (key == "noise.measurement") {
    noise.measurement = parse_bool(key, value);
  } else if (key == "noise.Q") {
    noise.process_cov_diag = parse_vector<4>(key, value);
  } else if (key == "noise.R") {
    noise.measurement_cov_diag = parse_vector<2>(key, value);
  } else if (key == "ukf.P0") {
    estimator.initial_cov_diag = parse_vector<4>(key, value);
  } else if (key == "ukf.Q") {
    estimator.process_cov_diag = parse_vector<4>(key, value);
  } else if (key == "ukf.R") {
    estimator.measurement_cov_diag = parse_vector<2>(key, value);
  } else if (key == "ukf.kappa") {
    estimator.kappa = parse_number(key, value);
  } else if (key == "ukf.reject_out_of_band") {
    estimator.reject_out_of_band = parse_bool(key, value);
  } else if (key == "ctrl.Tp") {
    ctrl_tp = parse_number(key, value);
  } else if (key == "ctrl.Ti") {
    ctrl_ti = parse_number(key, value);
  } else if (key == "ctrl.bias") {
    ctrl_bias = parse_number(key, value);
  } else if (key == "ctrl.windup_limit") {
    ctrl_windup_limit = parse_number(key, value);
  } else if (key == "ctrl.integral_form") {
    ctrl_form = parse_integral_form(trim(value));
  } else if (key == "ctrl.error_units") {
    ctrl_units = parse_error_units(trim(value));
  } else {
    throw ValidationError("config: unknown key '" + key + "'");
  }
}

void RunConfig::read(std::istream& in) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(number) + ": expected key = value");
    }
    try {
      set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ValidationError& e) {
      throw ValidationError("config line " + std::to_string(number) + ": " + e.what());
    }
  }
}

void RunConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open config file: " + path);
  read(f);
}

PamParams RunConfig::plant() const {
  PamParams p;
  for (const auto& [k, v] : plant_settings_) set_param(p, k, v);
  p.validate();
  return p;
}

PamParams RunConfig::model() const {
  PamParams p;
  for (const auto& [k, v] : plant_settings_) set_param(p, k, v);
  for (const auto& [k, v] : model_settings_) set_param(p, k, v);
  p.validate();
  return p;
}

Scenario RunConfig::scenario(RunMode mode) const {
  Scenario sc;
  sc.mode = mode;
  sc.noise = noise;
  sc.estimator = estimator;
  sc.units = ctrl_units;

  const PamParams p = plant();
  const bool control = mode == RunMode::kControlAngle || mode == RunMode::kControlTorque;
  if (control) {
    sc.duration = duration.value_or(30.0);
    const bool angle = mode == RunMode::kControlAngle;
    std::vector<ReferenceStep> steps = reference;
    if (steps.empty()) {
      const double a = angle ? 20.0 : 2.0;
      steps = {{0.0, a}, {10.0, -a}, {20.0, a}};
    }
    if (angle) {
      for (auto& s : steps) s.value *= std::numbers::pi / 180.0;
    }
    sc.reference = ReferenceSchedule(std::move(steps));

    PiController c = PiController::for_mode(angle ? LoopMode::kAngle : LoopMode::kTorque,
                                            p.sample_period);
    if (ctrl_tp) c.tp = *ctrl_tp;
    if (ctrl_ti) c.ti = *ctrl_ti;
    if (ctrl_bias) c.bias1 = c.bias2 = *ctrl_bias;
    if (ctrl_windup_limit) c.windup_limit = *ctrl_windup_limit;
    c.form = ctrl_form;
    c.validate();
    sc.controller = c;
  } else {
    sc.duration = duration.value_or(profile.duration);
    ProfileSpec spec = profile;
    spec.duration = sc.duration;
    sc.inputs = generate_profile(spec, p);
  }
  return sc;
}

}  // namespace pamtwin
