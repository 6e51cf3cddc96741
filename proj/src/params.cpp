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

#include "pamtwin/params.hpp"

#include <cmath>
#include <string>

#include "pamtwin/errors.hpp"

namespace pamtwin {
namespace {

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw ValidationError(std::string("parameter ") + name + " must be positive and finite");
  }
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw ValidationError(std::string("parameter ") + name + " must be finite");
  }
}

}  // namespace

void PamParams::validate() const {
  require_positive(shaft_radius, "r_p");
  require_positive(seesaw_radius, "r");
  require_positive(neutral_length, "L0");
  require_positive(seesaw_mass, "M");
  require_positive(gravity, "g");
  require_positive(inertia, "J");
  require_positive(tank_pressure, "P_tank");
  require_positive(atm_pressure, "P_out");
  require_positive(gas_constant, "R");
  require_positive(temperature, "T");
  require_positive(polytropic_flow, "k1");
  require_positive(polytropic_volume, "k2");
  require_positive(sample_period, "T_stp");
  require_positive(min_length, "l_min");
  require_positive(max_length, "l_max");
  require_positive(pressure_floor_margin, "pressure_floor_margin");
  require_finite(static_torque_coeff, "k_s");
  require_finite(vol_d1, "D1");
  require_finite(vol_d2, "D2");
  require_finite(vol_d3, "D3");
  if (!(viscous_coeff >= 0.0)) throw ValidationError("parameter c_s must be non-negative");
  if (!(tube_coulomb_coeff >= 0.0)) throw ValidationError("parameter Tp_coeff must be non-negative");
  if (!(shaft_coulomb_coeff >= 0.0)) throw ValidationError("parameter mu_s must be non-negative");
  if (!(tank_pressure > atm_pressure)) throw ValidationError("P_tank must exceed P_out");
  if (!(heat_ratio > 1.0)) throw ValidationError("specific-heat ratio k must exceed 1");
  if (rk4_substeps < 1) throw ValidationError("rk4_substeps must be at least 1");
  if (!(min_length < neutral_length && neutral_length < max_length)) {
    throw ValidationError("validity interval must contain L0");
  }
  for (const auto& c : force) {
    require_finite(c.v1, "p_v1");
    require_finite(c.v2, "p_v2");
    require_finite(c.w1, "p_w1");
    require_finite(c.w2, "p_w2");
  }
  for (const auto& a : orifice) {
    require_positive(a.inflow, "A_1");
    require_positive(a.outflow, "A_2");
  }
  for (const auto& m : open_rate) {
    if (m.empty()) throw ValidationError("open-rate map is empty");
  }
  for (double l : {min_length, max_length}) {
    if (!(vol_d1 * l * l + vol_d2 * l + vol_d3 > 0.0)) {
      throw ValidationError("volume polynomial is not positive over the validity interval");
    }
  }
}

}  // namespace pamtwin
