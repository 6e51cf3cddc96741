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

#include <span>

namespace pamtwin {

/// Error series z(0..N) with N + 1 samples:
///   rmse  = sqrt(sum_{k=0..N} z(k)^2 / N)   (note the N, not N + 1)
///   linf  = max |z(k)|
///   ratio = linf / (max xi - min xi)
struct Metrics {
  double rmse = 0.0;
  double linf = 0.0;
  double ratio = 0.0;
};

/// Needs at least two samples.
double metric_rmse(std::span<const double> z);
double metric_linf(std::span<const double> z);
/// Throws ValidationError when xi is flat.
double metric_ratio(std::span<const double> z, std::span<const double> xi);

Metrics compute_metrics(std::span<const double> z, std::span<const double> xi);

}  // namespace pamtwin
