// Copyright 2026 The qtrack Authors
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

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qtrack/errors.hpp"
#include "qtrack/sim.hpp"

namespace qtrack {

inline constexpr const char* kTrajectoryHeader =
    "t,e,kp,ki,kd,u,re_rho11,re_rho12,im_rho12,re_rho22,entropy,bloch_x,bloch_y,bloch_z,"
    "trace_residual,herm_residual,min_eig_rho";

namespace detail {

inline constexpr double TrajectoryRecord::*kTrajectoryColumns[] = {
    &TrajectoryRecord::t,        &TrajectoryRecord::e,           &TrajectoryRecord::kp,
    &TrajectoryRecord::ki,       &TrajectoryRecord::kd,          &TrajectoryRecord::u,
    &TrajectoryRecord::re_rho11, &TrajectoryRecord::re_rho12,    &TrajectoryRecord::im_rho12,
    &TrajectoryRecord::re_rho22, &TrajectoryRecord::entropy,     &TrajectoryRecord::bloch_x,
    &TrajectoryRecord::bloch_y,  &TrajectoryRecord::bloch_z,     &TrajectoryRecord::trace_residual,
    &TrajectoryRecord::herm_residual, &TrajectoryRecord::min_eig_rho,
};

// 17 significant digits round-trips every double.
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& records) {
  out << kTrajectoryHeader << '\n';
  for (const auto& r : records) {
    bool first = true;
    for (auto member : detail::kTrajectoryColumns) {
      if (!first) out << ',';
      out << detail::format_real(r.*member);
      first = false;
    }
    out << '\n';
  }
}

/// Parses a file written by write_trajectory_csv. The header must match exactly.
inline std::vector<TrajectoryRecord> read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader) {
    throw ConfigError("trajectory csv: missing or unexpected header");
  }
  std::vector<TrajectoryRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    TrajectoryRecord r;
    std::size_t col = 0;
    while (std::getline(row, cell, ',')) {
      if (col >= std::size(detail::kTrajectoryColumns)) throw ConfigError("trajectory csv: too many columns");
      try {
        r.*detail::kTrajectoryColumns[col] = std::stod(cell);
      } catch (const std::exception&) {
        throw ConfigError("trajectory csv: bad number '" + cell + "'");
      }
      ++col;
    }
    if (col != std::size(detail::kTrajectoryColumns)) throw ConfigError("trajectory csv: too few columns");
    records.push_back(r);
  }
  return records;
}

}  // namespace qtrack
