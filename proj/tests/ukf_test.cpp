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

#include <Eigen/Dense>
#include <random>

#include "pamtwin/errors.hpp"
#include "pamtwin/ukf.hpp"

namespace pamtwin::ukf {
namespace {

using Vec4 = Vector<4>;
using Mat4 = Matrix<4, 4>;
using Vec2 = Vector<2>;
using Mat2 = Matrix<2, 2>;
using Mat24 = Matrix<2, 4>;

double rel_diff(const auto& a, const auto& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

Mat4 random_spd(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat4 a;
  for (int i = 0; i < 16; ++i) a(i) = n(rng);
  return scale * (a * a.transpose() + 0.5 * Mat4::Identity());
}

TEST(SigmaPoints, WeightsForFourStatesAndZeroKappa) {
  GaussianBelief<4> b;
  const auto s = sigma_points(b, 0.0);
  EXPECT_EQ(s.weights[0], 0.0);
  double sum = 0.0;
  for (int i = 0; i < 9; ++i) {
    if (i > 0) {
      EXPECT_EQ(s.weights[i], 0.125);
    }
    sum += s.weights[i];
  }
  EXPECT_EQ(sum, 1.0);
}

TEST(SigmaPoints, IdentityCovarianceGivesPlusMinusTwo) {
  GaussianBelief<4> b;
  b.mean << 1.0, -2.0, 3.0, 0.5;
  const auto s = sigma_points(b, 0.0);
  EXPECT_EQ(s.points[0], b.mean);
  for (int i = 0; i < 4; ++i) {
    const Vec4 e = 2.0 * Vec4::Unit(i);
    EXPECT_EQ(s.points[1 + i], b.mean + e);
    EXPECT_EQ(s.points[5 + i], b.mean - e);
  }
}

TEST(SigmaPoints, WeightedMeanRecoversMean) {
  std::mt19937_64 rng(5);
  GaussianBelief<4> b;
  b.mean << 0.1, -0.2, 3e5, 4e5;
  b.cov = random_spd(rng);
  for (double kappa : {0.0, 1.0, 2.5}) {
    const auto s = sigma_points(b, kappa);
    EXPECT_LE(rel_diff(weighted_mean(s.points, s.weights), b.mean), 1e-15);
  }
}

TEST(SigmaPoints, SpreadReproducesCovariance) {
  std::mt19937_64 rng(6);
  GaussianBelief<4> b;
  b.cov = random_spd(rng);
  const auto s = sigma_points(b, 0.0);
  Mat4 c = Mat4::Zero();
  for (int i = 0; i < 9; ++i) c += s.weights[i] * (s.points[i] - b.mean) * (s.points[i] - b.mean).transpose();
  EXPECT_LE(rel_diff(c, b.cov), 1e-13);
}

TEST(SigmaPoints, RejectsKappaAtOrBelowMinusN) {
  GaussianBelief<4> b;
  EXPECT_THROW(sigma_points(b, -4.0), ValidationError);
}

TEST(Cholesky, RejectsNonFiniteAndIndefinite) {
  Mat4 m = Mat4::Identity();
  m(2, 2) = std::nan("");
  EXPECT_THROW(cholesky_factor<4>(m), NumericalError);
  m = Mat4::Identity();
  m(3, 3) = -1.0;
  EXPECT_THROW(cholesky_factor<4>(m), NumericalError);
}

TEST(Cholesky, ZeroMatrixGivesZeroFactor) {
  EXPECT_TRUE(cholesky_factor<4>(Mat4::Zero()).isZero(0.0));
}

TEST(Predict, IdentityWithoutNoiseKeepsBelief) {
  std::mt19937_64 rng(8);
  GaussianBelief<4> b;
  b.mean << 1, 2, 3, 4;
  b.cov = random_spd(rng);
  NoiseSpec<4, 2> noise;
  const auto prior = predict(b, noise, [](const Vec4& x) { return x; });
  EXPECT_LE(rel_diff(prior.mean, b.mean), 1e-15);
  EXPECT_LE(rel_diff(prior.cov, b.cov), 1e-10);
}

TEST(Predict, IdentityAddsProcessNoise) {
  std::mt19937_64 rng(9);
  GaussianBelief<4> b;
  b.cov = random_spd(rng);
  NoiseSpec<4, 2> noise;
  noise.process = Vec4(0.1, 0.2, 0.3, 0.4).asDiagonal();
  const auto prior = predict(b, noise, [](const Vec4& x) { return x; });
  EXPECT_LE(rel_diff(prior.cov, Mat4(b.cov + noise.process)), 1e-10);
}

TEST(Predict, LinearMapMatchesClosedForm) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> n(0.0, 1.0);
  Mat4 A;
  for (int i = 0; i < 16; ++i) A(i) = n(rng);
  GaussianBelief<4> b;
  b.mean << n(rng), n(rng), n(rng), n(rng);
  b.cov = random_spd(rng);
  NoiseSpec<4, 2> noise;
  noise.process = random_spd(rng, 0.01);
  const auto prior = predict(b, noise, [&](const Vec4& x) { return Vec4(A * x); });
  EXPECT_LE(rel_diff(prior.mean, Vec4(A * b.mean)), 1e-8);
  EXPECT_LE(rel_diff(prior.cov, Mat4(A * b.cov * A.transpose() + noise.process)), 1e-8);
}

struct KalmanOracle {
  Vec4 mean;
  Mat4 cov;
  void predict(const Mat4& A, const Mat4& Q) {
    mean = A * mean;
    cov = A * cov * A.transpose() + Q;
  }
  void update(const Vec2& y, const Mat24& C, const Mat2& R) {
    const Mat2 S = C * cov * C.transpose() + R;
    const Matrix<4, 2> K = cov * C.transpose() * S.inverse();
    mean = mean + K * (y - C * mean);
    cov = (Mat4::Identity() - K * C) * cov;
    cov = 0.5 * (cov + cov.transpose()).eval();
  }
};

TEST(Update, ZeroInnovationKeepsMean) {
  std::mt19937_64 rng(12);
  GaussianBelief<4> prior;
  prior.mean << 0.3, -0.1, 2e5, 5e5;
  prior.cov = random_spd(rng);
  NoiseSpec<4, 2> noise;
  Mat24 C = Mat24::Zero();
  C(0, 2) = 1.0;
  C(1, 3) = 1.0;
  const auto g = [&](const Vec4& x) { return Vec2(C * x); };
  const auto post = update(prior, Vec2(C * prior.mean), noise, g);
  EXPECT_LE(rel_diff(post.mean, prior.mean), 1e-15);
}

TEST(Update, LinearMeasurementMatchesKalman) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> n(0.0, 1.0);
  Mat24 C;
  for (int i = 0; i < 8; ++i) C(i) = n(rng);
  GaussianBelief<4> prior;
  prior.mean << n(rng), n(rng), n(rng), n(rng);
  prior.cov = random_spd(rng);
  NoiseSpec<4, 2> noise;
  noise.measurement = Mat2{{0.3, 0.05}, {0.05, 0.2}};
  const Vec2 y(n(rng), n(rng));
  const auto post = update(prior, y, noise, [&](const Vec4& x) { return Vec2(C * x); });
  KalmanOracle kf{prior.mean, prior.cov};
  kf.update(y, C, noise.measurement);
  EXPECT_LE(rel_diff(post.mean, kf.mean), 1e-8);
  EXPECT_LE(rel_diff(post.cov, kf.cov), 1e-8);
}

TEST(Update, LargeMeasurementNoiseShrinksCorrection) {
  std::mt19937_64 rng(14);
  GaussianBelief<4> prior;
  prior.cov = random_spd(rng);
  Mat24 C = Mat24::Zero();
  C(0, 0) = 1.0;
  C(1, 2) = 1.0;
  const auto g = [&](const Vec4& x) { return Vec2(C * x); };
  NoiseSpec<4, 2> nominal;
  NoiseSpec<4, 2> vague;
  vague.measurement = 1e6 * nominal.measurement;
  const Vec2 y(1.0, -2.0);
  const double d_nominal = (update(prior, y, nominal, g).mean - prior.mean).norm();
  const double d_vague = (update(prior, y, vague, g).mean - prior.mean).norm();
  EXPECT_GE(d_nominal / d_vague, 1e3);
}

TEST(Update, RejectsNonFiniteMeasurement) {
  GaussianBelief<4> prior;
  NoiseSpec<4, 2> noise;
  const auto g = [](const Vec4& x) { return Vec2(x.head<2>()); };
  EXPECT_THROW(update(prior, Vec2(1.0, std::nan("")), noise, g), ValidationError);
}

// A thousand predict/update cycles of a random stable linear system: the
// unscented transform is exact for linear maps, so the filter must follow
// the closed-form Kalman filter to rounding.
TEST(FilterStep, LinearGaussianEquivalenceOverThousandSteps) {
  std::mt19937_64 rng(2026);
  std::normal_distribution<double> n(0.0, 1.0);
  Mat4 A;
  for (int i = 0; i < 16; ++i) A(i) = n(rng);
  const double radius = Eigen::EigenSolver<Mat4>(A).eigenvalues().cwiseAbs().maxCoeff();
  A *= 0.95 / radius;
  Mat24 C;
  for (int i = 0; i < 8; ++i) C(i) = n(rng);
  NoiseSpec<4, 2> noise;
  noise.process = random_spd(rng, 0.01);
  noise.measurement = random_spd(rng).topLeftCorner<2, 2>();

  GaussianBelief<4> b;
  b.cov = random_spd(rng);
  KalmanOracle kf{b.mean, b.cov};
  Vec4 x = Vec4::Zero();
  double worst_mean = 0.0, worst_cov = 0.0;
  for (int k = 0; k < 1000; ++k) {
    x = A * x + Vec4(n(rng), n(rng), n(rng), n(rng)) * 0.1;
    const Vec2 y = C * x + Vec2(n(rng), n(rng));
    b = filter_step(
        b, y, noise, [&](const Vec4& s) { return Vec4(A * s); },
        [&](const Vec4& s) { return Vec2(C * s); });
    kf.predict(A, noise.process);
    kf.update(y, C, noise.measurement);
    worst_mean = std::max(worst_mean, rel_diff(b.mean, kf.mean));
    worst_cov = std::max(worst_cov, rel_diff(b.cov, kf.cov));
  }
  EXPECT_LE(worst_mean, 1e-8);
  EXPECT_LE(worst_cov, 1e-8);
}

}  // namespace
}  // namespace pamtwin::ukf
