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

/**
 * @file ukf.hpp
 * @brief Additive-noise unscented Kalman filter over fixed-size Eigen types.
 *
 * Sigma points are mean +/- the columns of the lower Cholesky factor of
 * (n + kappa) P, with W0 = kappa / (n + kappa) and Wi = 1 / (2 (n + kappa)).
 * The prediction propagates them through the process model and adds Q; the
 * update regenerates sigma points from the prior, maps them through the
 * measurement model and applies the gain K = Pxy Pyy^-1, where Pyy already
 * contains R.
 *
 * Every covariance leaving this header is explicitly re-symmetrized and all
 * weighted sums run in a fixed order, so results are reproducible bit for bit.
 */

#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <array>
#include <cmath>
#include <string>

#include "pamtwin/errors.hpp"

namespace pamtwin::ukf {

template <int N>
using Vector = Eigen::Matrix<double, N, 1>;
template <int R, int C>
using Matrix = Eigen::Matrix<double, R, C>;

template <int N>
struct GaussianBelief {
  Vector<N> mean = Vector<N>::Zero();
  Matrix<N, N> cov = Matrix<N, N>::Identity();
};

template <int N, int M>
struct NoiseSpec {
  Matrix<N, N> process = Matrix<N, N>::Zero();      ///< Q
  Matrix<M, M> measurement = Matrix<M, M>::Identity();  ///< R
};

template <int N>
struct SigmaSet {
  static constexpr int kCount = 2 * N + 1;
  std::array<Vector<N>, kCount> points;
  std::array<double, kCount> weights;
  double kappa = 0.0;
};

template <int N>
Matrix<N, N> symmetrized(const Matrix<N, N>& m) {
  return 0.5 * (m + m.transpose());
}

/// Lower-triangular S with S S^T = m. A non-positive pivot is retried up to
/// three times with growing diagonal jitter of 1e-12 trace(m) / n.
template <int N>
Matrix<N, N> cholesky_factor(const Matrix<N, N>& m) {
  if (!m.allFinite()) throw NumericalError("covariance contains non-finite entries");
  if (m.isZero(0.0)) return Matrix<N, N>::Zero();
  Eigen::LLT<Matrix<N, N>> llt(m);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  const double jitter = 1e-12 * std::abs(m.trace()) / N;
  Matrix<N, N> work = m;
  for (int attempt = 0; attempt < 3; ++attempt) {
    work.diagonal().array() += jitter * double(1 << attempt);
    llt.compute(work);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw NumericalError("covariance is not positive semi-definite (Cholesky failed)");
}

template <int N>
SigmaSet<N> sigma_points(const GaussianBelief<N>& belief, double kappa) {
  if (!(N + kappa > 0.0)) {
    throw ValidationError("sigma_points: kappa must exceed -n");
  }
  const double scale = N + kappa;
  const Matrix<N, N> root = cholesky_factor<N>(scale * belief.cov);
  SigmaSet<N> set;
  set.kappa = kappa;
  set.points[0] = belief.mean;
  set.weights[0] = kappa / scale;
  for (int i = 0; i < N; ++i) {
    set.points[1 + i] = belief.mean + root.col(i);
    set.points[1 + N + i] = belief.mean - root.col(i);
    set.weights[1 + i] = 0.5 / scale;
    set.weights[1 + N + i] = 0.5 / scale;
  }
  return set;
}

/// Weighted mean of transformed points.
template <int D, std::size_t K>
Vector<D> weighted_mean(const std::array<Vector<D>, K>& pts, const std::array<double, K>& w) {
  Vector<D> m = Vector<D>::Zero();
  for (std::size_t i = 0; i < K; ++i) m += w[i] * pts[i];
  return m;
}

/// Prior belief. `process` maps a state vector to the next state vector.
template <int N, int M, typename Process>
GaussianBelief<N> predict(const GaussianBelief<N>& belief, const NoiseSpec<N, M>& noise,
                          Process&& process, double kappa = 0.0) {
  const SigmaSet<N> sigma = sigma_points(belief, kappa);
  std::array<Vector<N>, SigmaSet<N>::kCount> moved;
  for (int i = 0; i < SigmaSet<N>::kCount; ++i) moved[i] = process(sigma.points[i]);

  GaussianBelief<N> prior;
  prior.mean = weighted_mean(moved, sigma.weights);
  Matrix<N, N> cov = noise.process;
  for (int i = 0; i < SigmaSet<N>::kCount; ++i) {
    const Vector<N> d = moved[i] - prior.mean;
    cov += sigma.weights[i] * d * d.transpose();
  }
  prior.cov = symmetrized<N>(cov);
  return prior;
}

/// Posterior belief given measurement y. `measure` maps a state vector to
/// a measurement vector.
template <int N, int M, typename Measure>
GaussianBelief<N> update(const GaussianBelief<N>& prior, const Vector<M>& y,
                         const NoiseSpec<N, M>& noise, Measure&& measure, double kappa = 0.0) {
  if (!y.allFinite()) throw ValidationError("update: measurement is not finite");
  const SigmaSet<N> sigma = sigma_points(prior, kappa);
  std::array<Vector<M>, SigmaSet<N>::kCount> ys;
  for (int i = 0; i < SigmaSet<N>::kCount; ++i) ys[i] = measure(sigma.points[i]);

  const Vector<M> y_hat = weighted_mean(ys, sigma.weights);
  Matrix<M, M> pyy = noise.measurement;
  Matrix<N, M> pxy = Matrix<N, M>::Zero();
  for (int i = 0; i < SigmaSet<N>::kCount; ++i) {
    const Vector<M> dy = ys[i] - y_hat;
    pyy += sigma.weights[i] * dy * dy.transpose();
    pxy += sigma.weights[i] * (sigma.points[i] - prior.mean) * dy.transpose();
  }
  pyy = symmetrized<M>(pyy);

  Eigen::LLT<Matrix<M, M>> llt(pyy);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("update: innovation covariance is singular");
  }
  // K = Pxy Pyy^-1, solved as Pyy K^T = Pxy^T.
  const Matrix<N, M> gain = llt.solve(pxy.transpose()).transpose();

  GaussianBelief<N> post;
  post.mean = prior.mean + gain * (y - y_hat);
  post.cov = symmetrized<N>(prior.cov - gain * pyy * gain.transpose());
  return post;
}

/// One predict/update cycle.
template <int N, int M, typename Process, typename Measure>
GaussianBelief<N> filter_step(const GaussianBelief<N>& belief, const Vector<M>& y,
                              const NoiseSpec<N, M>& noise, Process&& process, Measure&& measure,
                              double kappa = 0.0) {
  const GaussianBelief<N> prior = predict(belief, noise, process, kappa);
  return update(prior, y, noise, measure, kappa);
}

}  // namespace pamtwin::ukf
