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

/**
 * @file config.hpp
 * @brief Flat `key = value` configuration files.
 *
 * One assignment per line, `#` starts a comment. Complex 2x2 matrices are 8
 * whitespace-separated reals, row-major, real then imaginary part per entry.
 * Every key is optional and overrides the scenario defaults:
 *
 *   plant.h0 plant.h1 plant.l1 plant.rho0          (8 reals each)
 *   sim.dt sim.t_final sim.record_every sim.tau_d  (1 number each)
 *   target.rho_d                                   (8 reals)
 *   rcac.rz rcac.ru rcac.lambda rcac.p0_scalar rcac.beta
 *   sweep.p0_scalars sweep.betas                   (lists)
 *   sweep.jh_window                                (2 reals)
 */
#pragma once

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qtrack/errors.hpp"
#include "qtrack/lindblad.hpp"
#include "qtrack/presets.hpp"
#include "qtrack/rcac.hpp"
#include "qtrack/sim.hpp"

namespace qtrack {

struct SweepConfig {
  std::vector<double> p0_scalars;
  std::vector<double> betas;
  double t_lo = 190.0;
  double t_hi = 200.0;

  /// 10^-5 ... 10^10 by decades, beta in {0, 1, 2, 5, 100, 2000}, J_h on [190, 200].
  static SweepConfig paper_grid() {
    SweepConfig s;
    for (int k = -5; k <= 10; ++k) s.p0_scalars.push_back(std::stod("1e" + std::to_string(k)));
    s.betas = {0.0, 1.0, 2.0, 5.0, 100.0, 2000.0};
    return s;
  }

  void validate(double t_final) const {
    if (p0_scalars.empty() || betas.empty()) throw ConfigError("sweep grid must be non-empty");
    for (double p : p0_scalars) {
      if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("sweep.p0_scalars must be positive");
    }
    for (double b : betas) {
      if (!(b >= 0.0) || !std::isfinite(b)) throw ConfigError("sweep.betas must be nonnegative");
    }
    if (!(t_lo >= 0.0 && t_lo < t_hi && t_hi <= t_final)) {
      throw ConfigError("sweep.jh_window must satisfy 0 <= t_lo < t_hi <= sim.t_final");
    }
  }
};

/// Everything one run (or one sweep) needs.
struct RunSetup {
  std::string scenario;
  PlantConfig plant;
  RcacConfig rcac;
  SimConfig sim;
  SweepConfig sweep;
  double equilibrium_u;
};

/// The published setup for a named scenario: R_z = R_u = 1, lambda = 0.01,
/// P0 = 1e-3 I, beta = 2000, dt = 1e-4 s, T = 200 s.
inline RunSetup default_setup(std::string_view scenario) {
  ScenarioPreset preset = scenario_by_name(scenario);
  return RunSetup{preset.name, default_plant(), RcacConfig{}, SimConfig(preset.rho_d), SweepConfig::paper_grid(),
                  preset.equilibrium_u};
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<double> parse_reals(std::string_view key, std::string_view text, int line_no) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == ',')) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t' && text[end] != ',') ++end;
    const std::string token(text.substr(pos, end - pos));
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) {
      std::ostringstream os;
      os << "line " << line_no << ": " << key << ": '" << token << "' is not a number";
      throw ConfigError(os.str());
    }
    out.push_back(v);
    pos = end;
  }
  return out;
}

inline void require_count(std::string_view key, const std::vector<double>& v, std::size_t n, int line_no) {
  if (v.size() != n) {
    std::ostringstream os;
    os << "line " << line_no << ": " << key << " expects " << n << " value(s), got " << v.size();
    throw ConfigError(os.str());
  }
}

inline ComplexMatrix2 to_matrix(const std::vector<double>& v) {
  ComplexMatrix2 m;
  for (int k = 0; k < 4; ++k) m(k / 2, k % 2) = Complex(v[2 * k], v[2 * k + 1]);
  return m;
}

inline DensityMatrix to_density(std::string_view key, const std::vector<double>& v, int line_no,
                                const Tolerances& tol) {
  try {
    return DensityMatrix(to_matrix(v), tol);
  } catch (const NumericalError& err) {
    std::ostringstream os;
    os << "line " << line_no << ": " << key << " is not a valid density matrix: " << err.what();
    throw ConfigError(os.str());
  }
}

}  // namespace detail

/**
 * Applies the assignments in `in` on top of `setup` and re-validates the
 * result. Unknown keys, malformed numbers and invalid values raise ConfigError.
 */
inline void apply_config(std::istream& in, RunSetup& setup) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = detail::trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(detail::trim(view.substr(0, eq)));
    const std::vector<double> v = detail::parse_reals(key, detail::trim(view.substr(eq + 1)), line_no);
    const Tolerances& tol = setup.sim.tol;

    auto scalar = [&] {
      detail::require_count(key, v, 1, line_no);
      return v[0];
    };
    auto matrix = [&] {
      detail::require_count(key, v, 8, line_no);
      return detail::to_matrix(v);
    };
    auto density = [&] {
      detail::require_count(key, v, 8, line_no);
      return detail::to_density(key, v, line_no, tol);
    };

    if (key == "plant.h0") {
      setup.plant.h0 = matrix();
    } else if (key == "plant.h1") {
      setup.plant.h1 = matrix();
    } else if (key == "plant.l1") {
      setup.plant.jumps = {matrix()};
    } else if (key == "plant.rho0") {
      setup.plant.rho0 = density();
    } else if (key == "sim.dt") {
      setup.sim.dt = scalar();
    } else if (key == "sim.t_final") {
      setup.sim.t_final = scalar();
    } else if (key == "sim.record_every") {
      const double r = scalar();
      if (r != std::floor(r) || r < 1 || r > 1e9) throw ConfigError("sim.record_every must be a positive integer");
      setup.sim.record_every = static_cast<int>(r);
    } else if (key == "sim.tau_d") {
      setup.sim.tau_d = scalar();
    } else if (key == "target.rho_d") {
      setup.sim.rho_d = density();
    } else if (key == "rcac.rz") {
      setup.rcac.rz = scalar();
    } else if (key == "rcac.ru") {
      setup.rcac.ru = scalar();
    } else if (key == "rcac.lambda") {
      setup.rcac.lambda = scalar();
    } else if (key == "rcac.p0_scalar") {
      setup.rcac.p0 = scalar() * Matrix3::Identity();
    } else if (key == "rcac.beta") {
      setup.rcac.beta = scalar();
    } else if (key == "sweep.p0_scalars") {
      if (v.empty()) throw ConfigError("sweep.p0_scalars must not be empty");
      setup.sweep.p0_scalars = v;
    } else if (key == "sweep.betas") {
      if (v.empty()) throw ConfigError("sweep.betas must not be empty");
      setup.sweep.betas = v;
    } else if (key == "sweep.jh_window") {
      detail::require_count(key, v, 2, line_no);
      setup.sweep.t_lo = v[0];
      setup.sweep.t_hi = v[1];
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  setup.plant.validate(setup.sim.tol);
  setup.rcac.validate();
  setup.sim.validate(setup.rcac);
  setup.sweep.validate(setup.sim.t_final);
}

inline void apply_config_file(const std::string& path, RunSetup& setup) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  apply_config(in, setup);
}

}  // namespace qtrack
