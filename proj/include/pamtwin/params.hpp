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

#pragma once

#include <array>

#include "pamtwin/open_rate_map.hpp"

namespace pamtwin {

/// Linear-in-length coefficients of the pressure/force line of one muscle:
/// F = (v1*l + v2)*P + (w1*l + w2).
struct ForceCoefficients {
  double v1;
  double v2;
  double w1;
  double w2;
};

/// Orifice areas of one valve, selected by the direction of the net flow.
struct OrificeAreas {
  double inflow;   ///< used while air enters the muscle (m^2)
  double outflow;  ///< used while air leaves or is at rest (m^2)
};

/// Every physical and identified constant of the antagonistic rig.
/// Defaults are the identified values of the reference rig.
struct PamParams {
  // Geometry and mechanics.
  double shaft_radius = 0.006;      // r_p (m)
  double seesaw_radius = 0.0365;    // r (m)
  double neutral_length = 0.165;    // L0 (m)
  double seesaw_mass = 0.256;       // M (kg)
  double gravity = 9.80;            // g (m/s^2)
  double inertia = 4.263e-4;        // J (kg m^2)
  double static_torque_coeff = 4.117e-4;  // k_s (N m / rad)
  double viscous_coeff = 2.256e-3;  // c_s

  // Gas.
  double tank_pressure = 0.7100e6;  // P_tank (Pa, absolute)
  double atm_pressure = 0.1013e6;   // P_out (Pa)
  double heat_ratio = 1.40;         // k
  double gas_constant = 287.0;      // R (J/(kg K))
  double temperature = 293.0;       // T (K)
  double polytropic_flow = 1.100;   // k1
  double polytropic_volume = 0.4545;  // k2

  // Volume polynomial V = D1 l^2 + D2 l + D3.
  double vol_d1 = -2.440e-2;
  double vol_d2 = 6.824e-3;
  double vol_d3 = -4.254e-4;

  std::array<ForceCoefficients, 2> force = {{
      {7.045e-3, -1.017e-3, -5.568e2, 72.86},
      {6.423e-3, -9.184e-4, -197.8, -15.75},
  }};
  // Only the inflow areas A_1i were identified; the outflow areas A_2i
  // default to them.
  std::array<OrificeAreas, 2> orifice = {{
      {5.184e-8, 5.184e-8},
      {7.776e-8, 7.776e-8},
  }};

  // Friction.
  double tube_coulomb_coeff = 4e8;  // T_p' (a.k.a. mu_p)
  double shaft_coulomb_coeff = 0.2;  // mu_s

  // Discretization.
  double sample_period = 1e-3;  // T_stp (s)
  int rk4_substeps = 1;

  // Model validity.
  double min_length = 0.12;
  double max_length = 0.18;
  double pressure_floor_margin = 1e3;  // T_p evaluates P no lower than P_out + this

  /// Joint clamped at psi = 0 (torque-measurement configuration).
  bool locked_joint = false;

  std::array<OpenRateMap, 2> open_rate = {OpenRateMap::linear_default(),
                                          OpenRateMap::linear_default()};

  /// Throws ValidationError on any violated invariant.
  void validate() const;

  /// Torque bookkeeping term M*g used by the shaft friction.
  double weight() const noexcept { return seesaw_mass * gravity; }
};

/// Which muscle/valve: the index carried throughout the model.
enum class Side : int { kFirst = 0, kSecond = 1 };

inline constexpr int index_of(Side s) noexcept { return static_cast<int>(s); }

}  // namespace pamtwin
