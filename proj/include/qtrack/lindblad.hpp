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
 * @file lindblad.hpp
 * @brief Controlled Lindblad (LGKS) dynamics of a two-level system, hbar = 1.
 *
 *   drho/dt = -i[H0 + H1 u, rho] + sum_k (L_k rho L_k^H - 1/2 {L_k^H L_k, rho})
 */
#pragma once

#include <utility>
#include <vector>

#include "qtrack/quantum_core.hpp"

namespace qtrack {

/// Plant description: free and control Hamiltonians, jump operators and the
/// initial state. Immutable once validated.
struct PlantConfig {
  ComplexMatrix2 h0;
  ComplexMatrix2 h1;
  std::vector<ComplexMatrix2> jumps;
  DensityMatrix rho0;

  /// Throws ConfigError if a Hamiltonian is not Hermitian or there are no jumps.
  void validate(const Tolerances& tol = {}) const {
    if (hermiticity_residual(h0) > tol.herm) throw ConfigError("plant.h0 is not Hermitian");
    if (hermiticity_residual(h1) > tol.herm) throw ConfigError("plant.h1 is not Hermitian");
    if (jumps.empty()) throw ConfigError("plant needs at least one jump operator");
    for (const auto& l : jumps) {
      if (!all_finite(l)) throw ConfigError("plant jump operator has non-finite entries");
    }
  }
};

/// H0 = sigma_z/2, H1 = sigma_x/2, single decay channel L1 = sigma_+,
/// and the mixed initial state with rho12 = 0.1 + 0.3i.
inline PlantConfig default_plant() {
  ComplexMatrix2 h0, h1, l1;
  h0 << 0.5, 0.0, 0.0, -0.5;
  h1 << 0.0, 0.5, 0.5, 0.0;
  l1 << 0.0, 1.0, 0.0, 0.0;
  return PlantConfig{h0, h1, {l1}, DensityMatrix::from_entries(0.4, Complex(0.1, 0.3))};
}

inline ComplexMatrix2 hamiltonian(const PlantConfig& cfg, double u) { return cfg.h0 + cfg.h1 * u; }

/// Right-hand side of the master equation. rho only needs to be Hermitian
/// (Runge-Kutta stage values are not unit trace); it is not validated here.
inline ComplexMatrix2 lgks_rhs(const PlantConfig& cfg, const ComplexMatrix2& rho, double u) {
  constexpr Complex kI(0.0, 1.0);
  ComplexMatrix2 out = -kI * commutator(hamiltonian(cfg, u), rho);
  for (const auto& l : cfg.jumps) {
    const ComplexMatrix2 ld = l.adjoint();
    out += l * rho * ld - 0.5 * anticommutator(ld * l, rho);
  }
  return out;
}

/// ||lgks_rhs(rho, u)||_F; zero at a stationary point of the open-loop plant.
inline double equilibrium_residual(const PlantConfig& cfg, const DensityMatrix& rho, double u) {
  return lgks_rhs(cfg, rho.matrix(), u).norm();
}

}  // namespace qtrack
