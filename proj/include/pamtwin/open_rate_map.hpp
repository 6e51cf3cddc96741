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

#include <iosfwd>
#include <string>
#include <vector>

namespace pamtwin {

/// One node of the valve voltage -> open rate table.
struct OpenRatePoint {
  double u;      ///< command voltage (V)
  double alpha;  ///< open rate in [0, 1]

  friend bool operator==(const OpenRatePoint&, const OpenRatePoint&) = default;
};

/// Piecewise-linear, monotone map from PDCV command voltage to the
/// effective open rate alpha. Outside the breakpoint span the end values
/// are held.
class OpenRateMap {
 public:
  OpenRateMap() = default;

  /// Throws ValidationError unless u is strictly increasing, alpha is
  /// non-decreasing and every alpha lies in [0, 1]. An empty table is
  /// accepted here and rejected at evaluation time.
  explicit OpenRateMap(std::vector<OpenRatePoint> points);

  /// Default table: linear from (1 V, 0) to (10 V, 1), so alpha(5.5) = 0.5.
  static OpenRateMap linear_default();

  /// Evaluates alpha = kappa(u). Throws ValidationError on an empty map.
  double operator()(double u) const;

  const std::vector<OpenRatePoint>& points() const noexcept { return points_; }
  bool empty() const noexcept { return points_.empty(); }

  /// Two-column text: "u alpha" per line, '#' starts a comment.
  static OpenRateMap parse(std::istream& in);
  static OpenRateMap load(const std::string& path);
  void write(std::ostream& out) const;
  void save(const std::string& path) const;

  friend bool operator==(const OpenRateMap&, const OpenRateMap&) = default;

 private:
  std::vector<OpenRatePoint> points_;
};

/// Evaluates the map; free-function spelling of OpenRateMap::operator().
inline double open_rate(double u, const OpenRateMap& map) { return map(u); }

}  // namespace pamtwin
