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

#include "pamtwin/open_rate_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "pamtwin/errors.hpp"

namespace pamtwin {

OpenRateMap::OpenRateMap(std::vector<OpenRatePoint> points)
    : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.u) || !std::isfinite(p.alpha)) {
      throw ValidationError("open-rate map: non-finite breakpoint");
    }
    if (p.alpha < 0.0 || p.alpha > 1.0) {
      throw ValidationError("open-rate map: alpha outside [0, 1] at u = " +
                            std::to_string(p.u));
    }
    if (i > 0) {
      if (!(p.u > points_[i - 1].u)) {
        throw ValidationError("open-rate map: voltages must be strictly increasing");
      }
      if (p.alpha < points_[i - 1].alpha) {
        throw ValidationError("open-rate map: alpha must be non-decreasing");
      }
    }
  }
}

OpenRateMap OpenRateMap::linear_default() {
  return OpenRateMap({{1.0, 0.0}, {10.0, 1.0}});
}

double OpenRateMap::operator()(double u) const {
  if (points_.empty()) {
    throw ValidationError("open-rate map is empty");
  }
  if (u <= points_.front().u) return points_.front().alpha;
  if (u >= points_.back().u) return points_.back().alpha;
  auto hi = std::upper_bound(points_.begin(), points_.end(), u,
                             [](double v, const OpenRatePoint& p) { return v < p.u; });
  auto lo = hi - 1;
  if (u == lo->u) return lo->alpha;
  const double s = (u - lo->u) / (hi->u - lo->u);
  return lo->alpha + s * (hi->alpha - lo->alpha);
}

OpenRateMap OpenRateMap::parse(std::istream& in) {
  std::vector<OpenRatePoint> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double u = 0.0;
    double a = 0.0;
    if (!(ls >> u)) continue;  // blank line
    std::string rest;
    if (!(ls >> a) || (ls >> rest)) {
      throw ValidationError("open-rate map: malformed line " + std::to_string(lineno));
    }
    pts.push_back({u, a});
  }
  return OpenRateMap(std::move(pts));
}

OpenRateMap OpenRateMap::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open open-rate map: " + path);
  return parse(f);
}

void OpenRateMap::write(std::ostream& out) const {
  out << "# u_volts alpha\n";
  out << std::setprecision(17);
  for (const auto& p : points_) out << p.u << ' ' << p.alpha << '\n';
}

void OpenRateMap::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write open-rate map: " + path);
  write(f);
}

}  // namespace pamtwin
