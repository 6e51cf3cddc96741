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
#include <vector>

#include "pamtwin/errors.hpp"
#include "pamtwin/pneumatics.hpp"
#include "test_support.hpp"

namespace pamtwin {
namespace {

using testing::RelNear;

// Textbook isentropic orifice flow, written independently of the library:
// m = A P_up / sqrt(R T) * Psi(r), Psi = sqrt(2k/(k-1) (r^(2/k) - r^((k+1)/k)))
// below the critical ratio, Psi* = sqrt(k) (2/(k+1))^((k+1)/(2(k-1))) above it.
double oracle_flow(double p_up, double p_down, double area) {
  const double k = 1.4, R = 287.0, T = 293.0;
  const double crit = std::pow(2.0 / (k + 1.0), k / (k - 1.0));
  const double r = p_down / p_up;
  double psi;
  if (r <= crit) {
    psi = std::sqrt(k) * std::pow(2.0 / (k + 1.0), (k + 1.0) / (2.0 * (k - 1.0)));
  } else {
    psi = std::sqrt(2.0 * k / (k - 1.0) * (std::pow(r, 2.0 / k) - std::pow(r, (k + 1.0) / k)));
  }
  return area * p_up / std::sqrt(R * T) * psi;
}

TEST(Pneumatics, ChokeRatioForAir) {
  EXPECT_NEAR(choke_ratio(1.4), 0.5283, 1e-4);
  EXPECT_NEAR(choke_ratio(1.4), std::pow(2.0 / 2.4, 3.5), 1e-15);
}

TEST(Pneumatics, ChokingThresholdPressure) {
  const PamParams p;
  // The quoted threshold uses the ratio rounded to 0.5283.
  EXPECT_TRUE(RelNear(choke_ratio(p.heat_ratio) * p.tank_pressure, 3.7509e5, 1e-4));
}

TEST(Pneumatics, ChokedInflowHandValue) {
  const PamParams p;
  const double m = mass_flow_in(3.0e5, 5.184e-8, p);
  EXPECT_TRUE(RelNear(m, 8.691e-5, 1e-3));
  EXPECT_TRUE(RelNear(m, oracle_flow(p.tank_pressure, 3.0e5, 5.184e-8), 1e-12));
  EXPECT_EQ(inflow_regime(3.0e5, p), FlowRegime::kChoked);
}

TEST(Pneumatics, SubsonicInflowHandValue) {
  const PamParams p;
  const double m = mass_flow_in(6.0e5, 5.184e-8, p);
  EXPECT_TRUE(RelNear(m, 6.453e-5, 1e-3));
  EXPECT_TRUE(RelNear(m, oracle_flow(p.tank_pressure, 6.0e5, 5.184e-8), 1e-12));
  EXPECT_EQ(inflow_regime(6.0e5, p), FlowRegime::kUnchoked);
}

TEST(Pneumatics, OutflowMatchesOracleAcrossRange) {
  const PamParams p;
  for (double P = 1.02e5; P < 7.1e5; P += 1.1e4) {
    EXPECT_TRUE(RelNear(mass_flow_out(P, 7.776e-8, p), oracle_flow(P, p.atm_pressure, 7.776e-8),
                        1e-12))
        << "P = " << P;
  }
}

TEST(Pneumatics, InflowMatchesOracleAcrossRange) {
  const PamParams p;
  for (double P = 1.02e5; P < 7.09e5; P += 1.1e4) {
    EXPECT_TRUE(RelNear(mass_flow_in(P, 5.184e-8, p), oracle_flow(p.tank_pressure, P, 5.184e-8),
                        1e-12))
        << "P = " << P;
  }
}

// Relative mismatch between the two one-sided linear extrapolations to the
// threshold, built from samples 1 Pa and 2 Pa away on each side. A smooth
// function gives a value of order (1 Pa / P)^2; a jump shows up directly.
template <typename F>
double threshold_jump(F f, double p_star) {
  const double left = 2.0 * f(p_star - 1.0) - f(p_star - 2.0);
  const double right = 2.0 * f(p_star + 1.0) - f(p_star + 2.0);
  return std::abs(left - right) / std::abs(f(p_star));
}

TEST(Pneumatics, InflowContinuousAtChokingThreshold) {
  const PamParams p;
  const double p_star = choke_ratio(p.heat_ratio) * p.tank_pressure;
  EXPECT_EQ(inflow_regime(p_star - 1.0, p), FlowRegime::kChoked);
  EXPECT_EQ(inflow_regime(p_star + 1.0, p), FlowRegime::kUnchoked);
  const auto f = [&](double P) { return mass_flow_in(P, 5.184e-8, p); };
  EXPECT_LE(threshold_jump(f, p_star), 1e-9);
  EXPECT_LE(std::abs(f(p_star + 1.0) - f(p_star - 1.0)) / f(p_star), 1e-9);
}

TEST(Pneumatics, OutflowContinuousAtChokingThreshold) {
  const PamParams p;
  const double p_star = p.atm_pressure / choke_ratio(p.heat_ratio);
  EXPECT_EQ(outflow_regime(p_star + 1.0, p), FlowRegime::kChoked);
  EXPECT_EQ(outflow_regime(p_star - 1.0, p), FlowRegime::kUnchoked);
  const auto f = [&](double P) { return mass_flow_out(P, 5.184e-8, p); };
  EXPECT_LE(threshold_jump(f, p_star), 1e-9);
}

TEST(Pneumatics, FlowsAreMonotoneInPressure) {
  const PamParams p;
  double prev_in = mass_flow_in(p.atm_pressure, 1e-7, p);
  double prev_out = mass_flow_out(p.atm_pressure, 1e-7, p);
  EXPECT_EQ(prev_out, 0.0);
  for (double P = p.atm_pressure + 500.0; P <= p.tank_pressure; P += 500.0) {
    const double in = mass_flow_in(P, 1e-7, p);
    const double out = mass_flow_out(P, 1e-7, p);
    EXPECT_LE(in, prev_in);
    EXPECT_GE(out, prev_out);
    prev_in = in;
    prev_out = out;
  }
  EXPECT_EQ(mass_flow_in(p.tank_pressure, 1e-7, p), 0.0);
}

TEST(Pneumatics, RegimeLabelsFollowThresholds) {
  const PamParams p;
  const double c = choke_ratio(p.heat_ratio);
  for (double P = 1.05e5; P < 7.0e5; P += 5e3) {
    EXPECT_EQ(inflow_regime(P, p) == FlowRegime::kChoked, P / p.tank_pressure <= c);
    EXPECT_EQ(outflow_regime(P, p) == FlowRegime::kChoked, p.atm_pressure / P <= c);
  }
}

TEST(Pneumatics, FullyOpenValveIsPureInflow) {
  const PamParams p;
  const auto r = valve_flow(1.0, 3.0e5, p.orifice[0], p);
  EXPECT_EQ(r.mass_flow, mass_flow_in(3.0e5, p.orifice[0].inflow, p));
  EXPECT_EQ(r.area, p.orifice[0].inflow);
}

TEST(Pneumatics, ClosedValveIsPureOutflowThroughExhaustArea) {
  PamParams p;
  p.orifice[0].outflow = 2.0 * p.orifice[0].inflow;
  const auto r = valve_flow(0.0, 3.0e5, p.orifice[0], p);
  EXPECT_EQ(r.mass_flow, -mass_flow_out(3.0e5, p.orifice[0].outflow, p));
  EXPECT_EQ(r.area, p.orifice[0].outflow);
}

// Bisection on alpha for alpha m_in = (1 - alpha) m_out with the oracle flows.
double oracle_balance_alpha(double P) {
  const PamParams p;
  const double a_in = oracle_flow(p.tank_pressure, P, 1.0);
  const double a_out = oracle_flow(P, p.atm_pressure, 1.0);
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * a_in - (1.0 - mid) * a_out < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TEST(Pneumatics, BalanceOpenRateGivesZeroNetFlow) {
  const PamParams p;
  for (double P : {1.5e5, 3.0e5, 3.7509e5, 5.0e5, 6.5e5}) {
    const double alpha = oracle_balance_alpha(P);
    const auto r = valve_flow(alpha, P, p.orifice[1], p);
    EXPECT_LE(std::abs(r.mass_flow), 1e-12 * mass_flow_in(P, p.orifice[1].inflow, p));
  }
}

TEST(Pneumatics, BalancePressureInvertsBalanceOpenRate) {
  const PamParams p;
  for (double P : {1.5e5, 3.0e5, 5.0e5, 6.5e5}) {
    EXPECT_TRUE(RelNear(balance_pressure(oracle_balance_alpha(P), p), P, 1e-9));
  }
  EXPECT_EQ(balance_pressure(0.0, p), p.atm_pressure);
  EXPECT_EQ(balance_pressure(1.0, p), p.tank_pressure);
  EXPECT_THROW(balance_pressure(1.5, p), ValidationError);
}

TEST(Pneumatics, EqualOpenRatesGiveEqualStaticPressures) {
  const PamParams p;
  const double p1 = steady_pressure_for_input(5.5, Side::kFirst, p);
  const double p2 = steady_pressure_for_input(5.5, Side::kSecond, p);
  EXPECT_LE(std::abs(p1 - p2) / p1, 0.01);
  EXPECT_NEAR(oracle_balance_alpha(p1), 0.5, 1e-9);
}

TEST(Pneumatics, StaticPressureIndependentOfOrificeArea) {
  PamParams a;
  PamParams b;
  for (auto& o : b.orifice) {
    o.inflow *= 3.0;
    o.outflow *= 0.5;
  }
  // Flow direction picks the area, so the balance point needs no area at all.
  for (double alpha : {0.1, 0.35, 0.5, 0.8}) {
    const double P = balance_pressure(alpha, a);
    EXPECT_LE(std::abs(valve_flow(alpha, P, b.orifice[0], b).mass_flow),
              1e-9 * mass_flow_in(P, b.orifice[0].inflow, b));
  }
}

TEST(Pneumatics, PressureRateAtRestIsZero) {
  EXPECT_EQ(pressure_rate(3e5, 3.627e-5, 0.0, 0.0, PamParams{}), 0.0);
}

TEST(Pneumatics, PressureRateHandValue) {
  const double expected = 1.1 * 287.0 * 293.0 * 8.691e-5 / 3.627e-5;
  EXPECT_TRUE(RelNear(pressure_rate(3e5, 3.627e-5, 0.0, 8.691e-5, PamParams{}), expected, 1e-12));
  EXPECT_TRUE(RelNear(expected, 2.216e5, 1e-3));
}

TEST(Pneumatics, ExpansionWithoutFlowDepressurizes) {
  EXPECT_LT(pressure_rate(3e5, 3.6e-5, 1e-6, 0.0, PamParams{}), 0.0);
}

TEST(Pneumatics, PressureRateRejectsNonPositiveVolume) {
  EXPECT_THROW(pressure_rate(3e5, 0.0, 0.0, 0.0, PamParams{}), ModelDomainError);
}

TEST(Calibration, FullPressureMapsToFullOpenRate) {
  const PamParams p;
  const std::vector<SteadyPressureDatum> data{{10.0, balance_pressure(1.0, p)}};
  EXPECT_EQ(calibrate_open_rate_map(data, p)(10.0), 1.0);
}

TEST(Calibration, RecoversMidOpenRate) {
  const PamParams p;
  const std::vector<SteadyPressureDatum> data{{5.0, balance_pressure(0.5, p)}};
  EXPECT_NEAR(calibrate_open_rate_map(data, p)(5.0), 0.5, 1e-3);
}

TEST(Calibration, RoundTripsASweepOfOpenRates) {
  const PamParams p;
  std::vector<SteadyPressureDatum> data;
  for (int i = 0; i <= 9; ++i) data.push_back({1.0 + i, balance_pressure(i / 9.0, p)});
  const auto map = calibrate_open_rate_map(data, p);
  for (int i = 0; i <= 9; ++i) EXPECT_NEAR(map(1.0 + i), i / 9.0, 1e-3);
}

TEST(Calibration, EqualPressuresGiveFlatSegment) {
  const PamParams p;
  const double P = balance_pressure(0.4, p);
  const std::vector<SteadyPressureDatum> data{{3.0, P}, {4.0, P}};
  const auto map = calibrate_open_rate_map(data, p);
  EXPECT_EQ(map(3.0), map(4.0));
}

TEST(Calibration, NonMonotoneDataAreClippedToMonotone) {
  const PamParams p;
  const std::vector<SteadyPressureDatum> data{{3.0, balance_pressure(0.6, p)},
                                              {4.0, balance_pressure(0.4, p)}};
  const auto map = calibrate_open_rate_map(data, p);
  EXPECT_GE(map(4.0), map(3.0));
}

TEST(Calibration, UnreachablePressureNamesTheDatum) {
  const PamParams p;
  const std::vector<SteadyPressureDatum> data{{2.0, 3e5}, {3.0, 9e5}};
  try {
    calibrate_open_rate_map(data, p);
    FAIL() << "expected CalibrationError";
  } catch (const CalibrationError& e) {
    EXPECT_EQ(e.datum_index(), 1u);
  }
}

}  // namespace
}  // namespace pamtwin
