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

#include "pamtwin/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "pamtwin/errors.hpp"

namespace pamtwin {

double metric_rmse(std::span<const double> z) {
  if (z.size() < 2) throw ValidationError("rmse needs at least two samples");
  double sum = 0.0;
  for (double v : z) sum += v * v;
  return std::sqrt(sum / static_cast<double>(z.size() - 1));
}

double metric_linf(std::span<const double> z) {
  if (z.empty()) throw ValidationError("linf of an empty series");
  double m = 0.0;
  for (double v : z) m = std::max(m, std::abs(v));
  return m;
}

double metric_ratio(std::span<const double> z, std::span<const double> xi) {
  if (xi.empty()) throw ValidationError("ratio against an empty reference series");
  const auto [lo, hi] = std::minmax_element(xi.begin(), xi.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) throw ValidationError("ratio undefined: reference signal is flat");
  return metric_linf(z) / range;
}

Metrics compute_metrics(std::span<const double> z, std::span<const double> xi) {
  return {metric_rmse(z), metric_linf(z), metric_ratio(z, xi)};
}

}  // namespace pamtwin
