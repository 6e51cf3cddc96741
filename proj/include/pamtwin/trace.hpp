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
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace pamtwin {

inline constexpr double kNotAvailable = std::numeric_limits<double>::quiet_NaN();

/// One sampling instant. Row k holds the true state x(k), the measurement
/// of x(k), the estimate after processing that measurement and the input
/// applied from k to k + 1. Columns that do not apply to a run are NaN.
struct TraceRow {
  double t = 0.0;
  double u1 = kNotAvailable;
  double u2 = kNotAvailable;
  double u1_raw = kNotAvailable;  ///< controller output before saturation
  double u2_raw = kNotAvailable;
  double psi = kNotAvailable;
  double psi_dot = kNotAvailable;
  double p1 = kNotAvailable;
  double p2 = kNotAvailable;
  double tau = kNotAvailable;
  double y1 = kNotAvailable;  ///< measured P1
  double y2 = kNotAvailable;  ///< measured P2
  double psi_hat = kNotAvailable;
  double psi_dot_hat = kNotAvailable;
  double p1_hat = kNotAvailable;
  double p2_hat = kNotAvailable;
  double f1_hat = kNotAvailable;
  double f2_hat = kNotAvailable;
  double tau_hat = kNotAvailable;
  double reference = kNotAvailable;
  double ctrl_state = kNotAvailable;
  double rejected = 0.0;
  double step_cost = kNotAvailable;  ///< estimator wall-clock time (s)
};

struct Trace {
  double sample_period = 1e-3;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<TraceRow> rows;
  bool complete = true;       ///< false when a run aborted early
  std::string failure;        ///< reason for an incomplete run

  std::vector<double> column(double TraceRow::*field) const;
  void add_metadata(std::string key, std::string value);
  /// Returns the metadata value or an empty string.
  std::string meta(const std::string& key) const;
};

/// Column names in file order (step_cost last).
const std::vector<std::string>& trace_columns();

/// CSV: '#'-prefixed "key: value" metadata, one header line, one row per
/// sample. Doubles are written in shortest round-trip form, so a trace
/// read back compares equal. Wall-clock costs are machine dependent and
/// are only written when `include_timing` is set.
void write_trace_csv(std::ostream& out, const Trace& trace, bool include_timing = false);
void save_trace_csv(const std::string& path, const Trace& trace, bool include_timing = false);

Trace read_trace_csv(std::istream& in);
Trace load_trace_csv(const std::string& path);

/// Shortest round-trip decimal form ("nan" for NaN).
std::string format_double(double v);

}  // namespace pamtwin
