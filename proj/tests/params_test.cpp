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

#include <gtest/gtest.h>

#include <cmath>

#include "pamtwin/errors.hpp"
#include "pamtwin/params.hpp"

namespace pamtwin {
namespace {

// Identified values of the rig as published in its parameter tables.
TEST(Params, DefaultsMatchIdentifiedTable) {
  const PamParams p;
  EXPECT_EQ(p.shaft_radius, 0.006);
  EXPECT_EQ(p.seesaw_radius, 0.0365);
  EXPECT_EQ(p.neutral_length, 0.165);
  EXPECT_EQ(p.seesaw_mass, 0.256);
  EXPECT_EQ(p.gravity, 9.80);
  EXPECT_EQ(p.tank_pressure, 0.7100e6);
  EXPECT_EQ(p.atm_pressure, 0.1013e6);
  EXPECT_EQ(p.heat_ratio, 1.40);
  EXPECT_EQ(p.gas_constant, 287.0);
  EXPECT_EQ(p.temperature, 293.0);
  EXPECT_EQ(p.inertia, 4.263e-4);
  EXPECT_EQ(p.static_torque_coeff, 4.117e-4);
  EXPECT_EQ(p.viscous_coeff, 2.256e-3);
  EXPECT_EQ(p.vol_d1, -2.440e-2);
  EXPECT_EQ(p.vol_d2, 6.824e-3);
  EXPECT_EQ(p.vol_d3, -4.254e-4);
  EXPECT_EQ(p.force[0].v1, 7.045e-3);
  EXPECT_EQ(p.force[0].v2, -1.017e-3);
  EXPECT_EQ(p.force[0].w1, -5.568e2);
  EXPECT_EQ(p.force[0].w2, 72.86);
  EXPECT_EQ(p.force[1].v1, 6.423e-3);
  EXPECT_EQ(p.force[1].v2, -9.184e-4);
  EXPECT_EQ(p.force[1].w1, -197.8);
  EXPECT_EQ(p.force[1].w2, -15.75);
  EXPECT_EQ(p.orifice[0].inflow, 5.184e-8);
  EXPECT_EQ(p.orifice[1].inflow, 7.776e-8);
  EXPECT_EQ(p.polytropic_flow, 1.100);
  EXPECT_EQ(p.polytropic_volume, 0.4545);
  EXPECT_EQ(p.tube_coulomb_coeff, 4e8);
  EXPECT_EQ(p.shaft_coulomb_coeff, 0.2);
  EXPECT_EQ(p.sample_period, 1e-3);
}

TEST(Params, OutflowAreasDefaultToInflowAreas) {
  const PamParams p;
  for (const auto& a : p.orifice) EXPECT_EQ(a.outflow, a.inflow);
}

TEST(Params, DefaultsValidate) { EXPECT_NO_THROW(PamParams{}.validate()); }

TEST(Params, RejectsNonPositiveInertia) {
  PamParams p;
  p.inertia = 0.0;
  EXPECT_THROW(p.validate(), ValidationError);
  p.inertia = -1.0;
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(Params, RejectsTankBelowAtmosphere) {
  PamParams p;
  p.tank_pressure = p.atm_pressure;
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(Params, RejectsHeatRatioAtOrBelowOne) {
  PamParams p;
  p.heat_ratio = 1.0;
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(Params, RejectsNonFiniteAndNegativeValues) {
  PamParams p;
  p.orifice[1].outflow = -1e-8;
  EXPECT_THROW(p.validate(), ValidationError);
  p = PamParams{};
  p.force[0].w2 = std::nan("");
  EXPECT_THROW(p.validate(), ValidationError);
  p = PamParams{};
  p.shaft_coulomb_coeff = -0.1;
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(Params, RejectsValidityIntervalWithoutNeutralLength) {
  PamParams p;
  p.max_length = 0.16;
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(Params, RejectsEmptyOpenRateMap) {
  PamParams p;
  p.open_rate[0] = OpenRateMap{};
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(Params, WeightIsMassTimesGravity) {
  const PamParams p;
  EXPECT_DOUBLE_EQ(p.weight(), 0.256 * 9.80);
}

}  // namespace
}  // namespace pamtwin
