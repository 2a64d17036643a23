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

#include <string>
#include <string_view>
#include <vector>

#include "qtrack/errors.hpp"
#include "qtrack/lindblad.hpp"
#include "qtrack/quantum_core.hpp"

namespace qtrack {

/// A named tracking target together with the constant input that holds it.
struct ScenarioPreset {
  std::string name;
  DensityMatrix rho_d;
  double equilibrium_u;
};

/// S = 0.1013, stationary under u = 1.
inline ScenarioPreset low_entropy_preset() {
  return {"low_entropy", DensityMatrix::from_entries(0.8571, Complex(0.2857, 0.1429)), 1.0};
}

/// S = 0.6693, stationary under u = 10.
inline ScenarioPreset high_entropy_preset() {
  return {"high_entropy", DensityMatrix::from_entries(0.5168, Complex(0.0971, 0.0460)), 10.0};
}

inline std::vector<std::string> scenario_names() { return {"low_entropy", "high_entropy"}; }

inline ScenarioPreset scenario_by_name(std::string_view name) {
  if (name == "low_entropy") return low_entropy_preset();
  if (name == "high_entropy") return high_entropy_preset();
  throw ConfigError("unknown scenario '" + std::string(name) + "' (expected low_entropy or high_entropy)");
}

}  // namespace qtrack
