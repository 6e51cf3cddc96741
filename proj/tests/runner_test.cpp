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
#include <sstream>
#include <vector>

#include "pamtwin/config.hpp"
#include "pamtwin/errors.hpp"
#include "pamtwin/runner.hpp"
#include "test_support.hpp"

namespace pamtwin {
namespace {

Scenario short_scenario(RunMode mode, double duration) {
  RunConfig c;
  c.duration = duration;
  return c.scenario(mode);
}

TEST(Run, RowCountIsDurationOverPeriodPlusOne) {
  for (double d : {0.5, 1.0, 2.345}) {
    const Trace t = run(short_scenario(RunMode::kOpenLoop, d), PamParams{}, PamParams{});
    EXPECT_EQ(t.rows.size(), static_cast<std::size_t>(std::llround(d / 1e-3)) + 1);
    EXPECT_TRUE(t.complete);
  }
}

TEST(Run, OpenLoopLeavesEstimatesEmpty) {
  const Trace t = run(short_scenario(RunMode::kOpenLoop, 0.2), PamParams{}, PamParams{});
  EXPECT_TRUE(std::isnan(t.rows.back().psi_hat));
  EXPECT_FALSE(std::isnan(t.rows.back().y1));
  EXPECT_EQ(t.meta("mode"), "open_loop");
}

TEST(Run, OfflineAndOnlineEstimatesAgree) {
  const PamParams p;
  const Trace off = run(short_scenario(RunMode::kEstimateOffline, 1.0), p, p);
  const Trace on = run(short_scenario(RunMode::kEstimateOnline, 1.0), p, p);
  ASSERT_EQ(off.rows.size(), on.rows.size());
  for (std::size_t k = 0; k < off.rows.size(); ++k) {
    ASSERT_EQ(off.rows[k].psi_hat, on.rows[k].psi_hat) << k;
    ASSERT_EQ(off.rows[k].y1, on.rows[k].y1) << k;
  }
}

TEST(Run, IdenticalConfigGivesIdenticalTraceFiles) {
  const PamParams p;
  const auto text = [&] {
    std::ostringstream s;
    write_trace_csv(s, run(short_scenario(RunMode::kEstimateOffline, 2.0), p, p));
    return s.str();
  };
  EXPECT_EQ(text(), text());
}

TEST(Run, SweepModeDoesNotProduceATrace) {
  EXPECT_THROW(run(short_scenario(RunMode::kSweep, 1.0), PamParams{}, PamParams{}),
               ValidationError);
}

TEST(Run, NonPositiveDurationRejected) {
  Scenario sc = short_scenario(RunMode::kOpenLoop, 1.0);
  sc.duration = 0.0;
  EXPECT_THROW(run(sc, PamParams{}, PamParams{}), ValidationError);
}

// Estimator and twin share one model and nothing is noisy.
TEST(CompareOffline, NoiseFreeMatchedModelIsAccurate) {
  RunConfig c;
  c.set("noise.process", "none");
  c.set("noise.measurement", "false");
  const Scenario sc = c.scenario(RunMode::kOpenLoop);
  const Trace t = run(sc, c.plant(), c.model());
  const auto cmp = compare_offline(t, c.model(), sc.estimator);
  ASSERT_TRUE(cmp.psi.has_value());
  EXPECT_EQ(cmp.psi->model_only.rmse, 0.0);
  RecordProperty("ukf_ratio", std::to_string(cmp.psi->ukf.ratio));
  EXPECT_LT(cmp.psi->ukf.ratio, 0.01);
}

TEST(CompareOffline, LockedJointHasNoAngleEntry) {
  RunConfig c;
  c.set("locked_joint", "true");
  c.duration = 5.0;
  const Scenario sc = c.scenario(RunMode::kOpenLoop);
  const Trace t = run(sc, c.plant(), c.model());
  const auto cmp = compare_offline(t, c.model(), sc.estimator);
  EXPECT_FALSE(cmp.psi.has_value());
  ASSERT_TRUE(cmp.tau.has_value());
  EXPECT_LT(cmp.tau->ukf.ratio, 0.06);
}

TEST(CompareOffline, RejectsTraceWithoutMeasurements) {
  Trace t;
  t.rows.resize(3);
  EXPECT_THROW(compare_offline(t, PamParams{}, EstimatorConfig{}), ValidationError);
}

TEST(Tracking, SegmentsFollowReferenceChanges) {
  Trace t;
  for (int k = 0; k <= 4000; ++k) {
    TraceRow r;
    r.t = k * 1e-3;
    r.reference = k < 2000 ? 1.0 : -1.0;
    r.tau = r.reference - 0.1;
    t.rows.push_back(r);
  }
  const auto segs = steady_tracking_errors(t, LoopMode::kTorque);
  ASSERT_EQ(segs.size(), 2u);
  EXPECT_EQ(segs[1].t_start, 2.0);
  EXPECT_NEAR(segs[0].mean_error, 0.1, 1e-12);
  EXPECT_NEAR(segs[1].max_abs_error, 0.1, 1e-12);
}

TEST(Tracking, SkipsSegmentShorterThanWindow) {
  Trace t;
  for (int k = 0; k <= 2000; ++k) {
    TraceRow r;
    r.t = k * 1e-3;
    r.reference = k < 2000 ? 1.0 : -1.0;
    r.tau = 1.0;
    t.rows.push_back(r);
  }
  const auto segs = steady_tracking_errors(t, LoopMode::kTorque);
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_EQ(segs[0].max_abs_error, 0.0);
}

TEST(Sweep, SingleValueMatchesDirectRun) {
  const PamParams p;
  const std::vector<double> v{1.1};
  const auto r = sweep(SweepParameter::kK1, v, p, {7.0, 4.0});
  ASSERT_EQ(r.rows.size(), 1u);
  ASSERT_TRUE(r.rows[0].converged) << r.rows[0].error;
  const auto s = steady_state({7.0, 4.0}, p);
  EXPECT_EQ(r.rows[0].psi, s.psi);
  EXPECT_EQ(r.rows[0].p1, s.p1);
  EXPECT_TRUE(r.guideline_holds);
}

TEST(Sweep, TubeFrictionDoesNotIncreaseSteadyAngle) {
  const std::vector<double> v{4e8, 8e8};
  const auto r = sweep(SweepParameter::kTubeCoulomb, v, PamParams{}, {7.0, 4.0});
  ASSERT_TRUE(r.rows[0].converged && r.rows[1].converged);
  EXPECT_LE(std::abs(r.rows[1].psi), std::abs(r.rows[0].psi));
  EXPECT_TRUE(r.guideline_holds) << r.guideline;
}

TEST(Sweep, DoublingK1ShortensRiseTime) {
  const std::vector<double> v{1.1, 2.2};
  const auto r = sweep(SweepParameter::kK1, v, PamParams{}, {7.0, 4.0});
  EXPECT_LT(r.rows[1].rise_time1, r.rows[0].rise_time1);
  EXPECT_LT(r.rows[1].rise_time2, r.rows[0].rise_time2);
  EXPECT_TRUE(r.guideline_holds);
}

TEST(Sweep, AreaScaleAppliesToAllOrifices) {
  const PamParams q = with_sweep_value(PamParams{}, SweepParameter::kAreaScale, 2.0);
  EXPECT_EQ(q.orifice[0].inflow, 2.0 * 5.184e-8);
  EXPECT_EQ(q.orifice[1].outflow, 2.0 * 7.776e-8);
  EXPECT_EQ(parse_sweep_parameter("mu_s"), SweepParameter::kShaftCoulomb);
  EXPECT_THROW(parse_sweep_parameter("zeta"), ValidationError);
}

TEST(Bench, ReportCountsSamples) {
  const std::vector<double> costs(10, 2e-4);
  const auto r = bench_report(costs);
  EXPECT_EQ(r.samples, 10u);
  EXPECT_DOUBLE_EQ(r.mean, 2e-4);
  EXPECT_TRUE(r.within_budget);
}

TEST(Bench, PercentileNotBelowMean) {
  std::vector<double> costs;
  for (int i = 1; i <= 1000; ++i) costs.push_back(1e-6 * i * i);
  costs.push_back(std::nan(""));
  const auto r = bench_report(costs);
  EXPECT_EQ(r.samples, 1000u);
  EXPECT_GE(r.p99, r.mean);
  EXPECT_GE(r.max, r.p99);
  EXPECT_EQ(r.p99, 1e-6 * 990 * 990);
}

TEST(Bench, ShortRunReportsEverySample) {
  const auto r = bench(short_scenario(RunMode::kBench, 0.01), PamParams{}, PamParams{});
  EXPECT_EQ(r.samples, 10u);
}

}  // namespace
}  // namespace pamtwin
