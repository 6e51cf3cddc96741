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

#include "pamtwin/trace.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pamtwin/errors.hpp"

namespace pamtwin {
namespace {

using Field = double TraceRow::*;

struct ColumnDef {
  const char* name;
  Field field;
};

constexpr std::array<ColumnDef, 23> kColumns = {{
    {"t", &TraceRow::t},
    {"u1", &TraceRow::u1},
    {"u2", &TraceRow::u2},
    {"u1_raw", &TraceRow::u1_raw},
    {"u2_raw", &TraceRow::u2_raw},
    {"psi", &TraceRow::psi},
    {"psi_dot", &TraceRow::psi_dot},
    {"p1", &TraceRow::p1},
    {"p2", &TraceRow::p2},
    {"tau", &TraceRow::tau},
    {"y1", &TraceRow::y1},
    {"y2", &TraceRow::y2},
    {"psi_hat", &TraceRow::psi_hat},
    {"psi_dot_hat", &TraceRow::psi_dot_hat},
    {"p1_hat", &TraceRow::p1_hat},
    {"p2_hat", &TraceRow::p2_hat},
    {"f1_hat", &TraceRow::f1_hat},
    {"f2_hat", &TraceRow::f2_hat},
    {"tau_hat", &TraceRow::tau_hat},
    {"reference", &TraceRow::reference},
    {"ctrl_state", &TraceRow::ctrl_state},
    {"rejected", &TraceRow::rejected},
    {"step_cost", &TraceRow::step_cost},
}};

double parse_double(const std::string& s) {
  if (s == "nan") return kNotAvailable;
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("trace: cannot parse number '" + s + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::vector<double> Trace::column(double TraceRow::*field) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.*field);
  return out;
}

void Trace::add_metadata(std::string key, std::string value) {
  metadata.emplace_back(std::move(key), std::move(value));
}

std::string Trace::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return {};
}

const std::vector<std::string>& trace_columns() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& c : kColumns) n.emplace_back(c.name);
    return n;
  }();
  return names;
}

void write_trace_csv(std::ostream& out, const Trace& trace, bool include_timing) {
  out << "# sample_period: " << format_double(trace.sample_period) << '\n';
  for (const auto& [k, v] : trace.metadata) out << "# " << k << ": " << v << '\n';
  if (!trace.complete) out << "# incomplete: " << trace.failure << '\n';

  const std::size_t ncols = include_timing ? kColumns.size() : kColumns.size() - 1;
  for (std::size_t c = 0; c < ncols; ++c) out << (c ? "," : "") << kColumns[c].name;
  out << '\n';
  std::string line;
  for (const auto& row : trace.rows) {
    line.clear();
    for (std::size_t c = 0; c < ncols; ++c) {
      if (c) line += ',';
      line += format_double(row.*(kColumns[c].field));
    }
    line += '\n';
    out << line;
  }
}

void save_trace_csv(const std::string& path, const Trace& trace, bool include_timing) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write trace file: " + path);
  write_trace_csv(f, trace, include_timing);
}

Trace read_trace_csv(std::istream& in) {
  Trace trace;
  std::string line;
  std::vector<Field> fields;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string key = line.substr(1, colon - 1);
      std::string value = line.substr(colon + 1);
      const auto trim = [](std::string& s) {
        s.erase(0, s.find_first_not_of(' '));
        s.erase(s.find_last_not_of(' ') + 1);
      };
      trim(key);
      trim(value);
      if (key == "sample_period") {
        trace.sample_period = parse_double(value);
      } else if (key == "incomplete") {
        trace.complete = false;
        trace.failure = value;
      } else {
        trace.add_metadata(key, value);
      }
      continue;
    }
    std::istringstream ls(line);
    std::string cell;
    if (fields.empty()) {
      while (std::getline(ls, cell, ',')) {
        bool found = false;
        for (const auto& c : kColumns) {
          if (cell == c.name) {
            fields.push_back(c.field);
            found = true;
          }
        }
        if (!found) throw ValidationError("trace: unknown column '" + cell + "'");
      }
      continue;
    }
    TraceRow row;
    std::size_t c = 0;
    while (std::getline(ls, cell, ',')) {
      if (c >= fields.size()) throw ValidationError("trace: too many cells in a row");
      row.*(fields[c++]) = parse_double(cell);
    }
    if (c != fields.size()) throw ValidationError("trace: too few cells in a row");
    trace.rows.push_back(row);
  }
  if (fields.empty()) throw ValidationError("trace: missing header line");
  return trace;
}

Trace load_trace_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open trace file: " + path);
  return read_trace_csv(f);
}

}  // namespace pamtwin
