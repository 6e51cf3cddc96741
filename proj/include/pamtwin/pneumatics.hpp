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

// Valve and gas dynamics of one PAM: orifice mass flow through a
// proportional directional control valve and the resulting pressure rate.

#pragma once

#include <span>
#include <vector>

#include "pamtwin/open_rate_map.hpp"
#include "pamtwin/params.hpp"

namespace pamtwin {

enum class FlowRegime { kChoked, kUnchoked };

/// Critical downstream/upstream pressure ratio (2/(k+1))^(k/(k-1)).
double choke_ratio(double heat_ratio);

/// Mass flow from the tank into a muscle at pressure P through area A.
/// P is saturated to [P_out, P_tank]; the result is >= 0.
double mass_flow_in(double pressure, double area, const PamParams& params);

/// Mass flow from a muscle at pressure P to atmosphere through area A.
double mass_flow_out(double pressure, double area, const PamParams& params);

FlowRegime inflow_regime(double pressure, const PamParams& params);
FlowRegime outflow_regime(double pressure, const PamParams& params);

struct FlowResult {
  double mass_flow;  ///< net flow into the muscle (kg/s)
  FlowRegime inflow;
  FlowRegime outflow;
  double area;       ///< orifice area actually used (m^2)
};

/// Net flow m = alpha*m_in - (1-alpha)*m_out. The orifice area is chosen by
/// the flow direction; the sign of m does not depend on the area, so it is
/// probed once with the inflow area.
FlowResult valve_flow(double alpha, double pressure, const OrificeAreas& areas,
                      const PamParams& params);

/// valve_flow with alpha = kappa_i(u) for the given valve.
FlowResult valve_mass_flow(double u, double pressure, Side valve, const PamParams& params);

/// dP/dt = k1 R T m / V - k2 (dV/dt / V) P. Requires V > 0.
double pressure_rate(double pressure, double volume, double volume_rate, double mass_flow,
                     const PamParams& params);

/// Pressure at which alpha*m_in(P) = (1-alpha)*m_out(P), i.e. the static
/// pressure the valve holds a closed muscle at. Independent of the areas.
double balance_pressure(double alpha, const PamParams& params);

/// Static pressure for a valve voltage: balance_pressure(kappa_i(u)).
double steady_pressure_for_input(double u, Side valve, const PamParams& params);

/// Measured static pressure for one command voltage.
struct SteadyPressureDatum {
  double u;
  double pressure;
};

/// Tabulated alpha -> static pressure relation on a uniform alpha grid.
class AlphaPressureTable {
 public:
  AlphaPressureTable(const PamParams& params, int grid_points = 201);

  /// Inverts the table by linear interpolation. Throws CalibrationError
  /// (index 0) when P is outside [P(0), P(1)].
  double alpha_for(double pressure) const;

  std::span<const double> alphas() const noexcept { return alpha_; }
  std::span<const double> pressures() const noexcept { return pressure_; }

 private:
  std::vector<double> alpha_;
  std::vector<double> pressure_;
};

/// Builds kappa(u) from static (u, P) data: sweep alpha -> P on the model,
/// invert each datum, then clip to a monotone table. Throws CalibrationError
/// naming the first datum whose pressure cannot be reached.
OpenRateMap calibrate_open_rate_map(std::span<const SteadyPressureDatum> data,
                                    const PamParams& params, int grid_points = 201);

}  // namespace pamtwin
