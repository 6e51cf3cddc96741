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

#include "pamtwin/pneumatics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pamtwin/errors.hpp"

namespace pamtwin {
namespace {

// sqrt(k/R * (2/(k+1))^((k+1)/(k-1))): choked flow per unit (A * P_up / sqrt(T)).
double choked_factor(const PamParams& p) {
  const double k = p.heat_ratio;
  return std::sqrt(k / p.gas_constant * std::pow(2.0 / (k + 1.0), (k + 1.0) / (k - 1.0)));
}

// Subsonic flow per unit (A * P_up / sqrt(T)) at downstream/upstream ratio r.
double subsonic_factor(double ratio, const PamParams& p) {
  const double k = p.heat_ratio;
  const double c = std::sqrt(2.0 * k / (p.gas_constant * (k - 1.0)));
  const double tail = 1.0 - std::pow(ratio, (k - 1.0) / k);
  return c * std::pow(ratio, 1.0 / k) * std::sqrt(std::max(tail, 0.0));
}

double saturate(double pressure, const PamParams& p) {
  return std::clamp(pressure, p.atm_pressure, p.tank_pressure);
}

}  // namespace

double choke_ratio(double heat_ratio) {
  return std::pow(2.0 / (heat_ratio + 1.0), heat_ratio / (heat_ratio - 1.0));
}

FlowRegime inflow_regime(double pressure, const PamParams& params) {
  const double p = saturate(pressure, params);
  return p <= params.tank_pressure * choke_ratio(params.heat_ratio) ? FlowRegime::kChoked
                                                                    : FlowRegime::kUnchoked;
}

FlowRegime outflow_regime(double pressure, const PamParams& params) {
  const double p = saturate(pressure, params);
  return params.atm_pressure <= p * choke_ratio(params.heat_ratio) ? FlowRegime::kChoked
                                                                   : FlowRegime::kUnchoked;
}

double mass_flow_in(double pressure, double area, const PamParams& params) {
  const double p = saturate(pressure, params);
  const double scale = area * params.tank_pressure / std::sqrt(params.temperature);
  if (inflow_regime(p, params) == FlowRegime::kChoked) {
    return scale * choked_factor(params);
  }
  return scale * subsonic_factor(p / params.tank_pressure, params);
}

double mass_flow_out(double pressure, double area, const PamParams& params) {
  const double p = saturate(pressure, params);
  const double scale = area * p / std::sqrt(params.temperature);
  if (outflow_regime(p, params) == FlowRegime::kChoked) {
    return scale * choked_factor(params);
  }
  return scale * subsonic_factor(params.atm_pressure / p, params);
}

FlowResult valve_flow(double alpha, double pressure, const OrificeAreas& areas,
                      const PamParams& params) {
  const auto net = [&](double area) {
    return alpha * mass_flow_in(pressure, area, params) -
           (1.0 - alpha) * mass_flow_out(pressure, area, params);
  };
  const double probe = net(areas.inflow);
  const double area = probe > 0.0 ? areas.inflow : areas.outflow;
  const double m = area == areas.inflow ? probe : net(area);
  return {m, inflow_regime(pressure, params), outflow_regime(pressure, params), area};
}

FlowResult valve_mass_flow(double u, double pressure, Side valve, const PamParams& params) {
  const int i = index_of(valve);
  return valve_flow(params.open_rate[i](u), pressure, params.orifice[i], params);
}

double pressure_rate(double pressure, double volume, double volume_rate, double mass_flow,
                     const PamParams& params) {
  if (!(volume > 0.0)) {
    throw ModelDomainError("pressure_rate: non-positive muscle volume");
  }
  return params.polytropic_flow * params.gas_constant * params.temperature * mass_flow / volume -
         params.polytropic_volume * (volume_rate / volume) * pressure;
}

double balance_pressure(double alpha, const PamParams& params) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("balance_pressure: alpha outside [0, 1]");
  }
  if (alpha == 0.0) return params.atm_pressure;
  if (alpha == 1.0) return params.tank_pressure;
  // Unit area: the balance point is area independent.
  const auto residual = [&](double p) {
    return alpha * mass_flow_in(p, 1.0, params) - (1.0 - alpha) * mass_flow_out(p, 1.0, params);
  };
  // residual is non-increasing in P, >= 0 at P_out and <= 0 at P_tank.
  double lo = params.atm_pressure;
  double hi = params.tank_pressure;
  for (int it = 0; it < 200 && hi - lo > 1e-9; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double steady_pressure_for_input(double u, Side valve, const PamParams& params) {
  return balance_pressure(params.open_rate[index_of(valve)](u), params);
}

AlphaPressureTable::AlphaPressureTable(const PamParams& params, int grid_points) {
  if (grid_points < 2) throw ValidationError("alpha sweep needs at least two grid points");
  alpha_.resize(grid_points);
  pressure_.resize(grid_points);
  for (int i = 0; i < grid_points; ++i) {
    const double a = static_cast<double>(i) / (grid_points - 1);
    alpha_[i] = a;
    pressure_[i] = balance_pressure(a, params);
  }
}

double AlphaPressureTable::alpha_for(double pressure) const {
  if (pressure < pressure_.front() || pressure > pressure_.back()) {
    throw CalibrationError("static pressure " + std::to_string(pressure) +
                               " Pa is outside the reachable range",
                           0);
  }
  auto hi = std::lower_bound(pressure_.begin(), pressure_.end(), pressure);
  const auto j = static_cast<std::size_t>(hi - pressure_.begin());
  if (j == 0 || pressure_[j] == pressure) return alpha_[j];
  const double s = (pressure - pressure_[j - 1]) / (pressure_[j] - pressure_[j - 1]);
  return alpha_[j - 1] + s * (alpha_[j] - alpha_[j - 1]);
}

OpenRateMap calibrate_open_rate_map(std::span<const SteadyPressureDatum> data,
                                    const PamParams& params, int grid_points) {
  if (data.empty()) throw ValidationError("calibration needs at least one datum");
  const AlphaPressureTable table(params, grid_points);

  std::vector<OpenRatePoint> pts;
  pts.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& d = data[i];
    if (!std::isfinite(d.u) || !std::isfinite(d.pressure)) {
      throw CalibrationError("calibration datum " + std::to_string(i) + " is not finite", i);
    }
    try {
      pts.push_back({d.u, table.alpha_for(d.pressure)});
    } catch (const CalibrationError& e) {
      throw CalibrationError("calibration datum " + std::to_string(i) + " (u = " +
                                 std::to_string(d.u) + " V): " + e.what(),
                             i);
    }
  }
  std::sort(pts.begin(), pts.end(),
            [](const OpenRatePoint& a, const OpenRatePoint& b) { return a.u < b.u; });
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].u == pts[i - 1].u) {
      throw ValidationError("calibration data repeat the voltage " + std::to_string(pts[i].u));
    }
    pts[i].alpha = std::max(pts[i].alpha, pts[i - 1].alpha);
  }
  return OpenRateMap(std::move(pts));
}

}  // namespace pamtwin
