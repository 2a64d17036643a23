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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qtrack/quantum_core.hpp"

namespace qtrack {

struct BlochPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

/**
 * @brief Uhlmann-Jozsa fidelity from its definition,
 * F = (tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2.
 *
 * Two nested square roots; kept as a cross-check for fidelity_2x2.
 */
inline double fidelity_general(const DensityMatrix& rho1, const DensityMatrix& rho2,
                               const Tolerances& tol = {}) {
  const ComplexMatrix2 s1 = sqrt_psd(rho1.matrix(), tol);
  const ComplexMatrix2 inner = hermitian_part(s1 * rho2.matrix() * s1);
  const double root_trace = sqrt_psd(inner, tol).trace().real();
  return std::clamp(root_trace * root_trace, 0.0, 1.0);
}

namespace detail {

// Closed form on raw matrices with both determinants clamped at zero. Used
// inside the integrator, where Runge-Kutta stage values of a near-pure state
// can carry a roundoff-sized negative determinant.
inline double fidelity_2x2_unchecked(const ComplexMatrix2& rho1, const ComplexMatrix2& rho2) {
  const double overlap = (rho1 * rho2).trace().real();
  const double d1 = std::max(rho1.determinant().real(), 0.0);
  const double d2 = std::max(rho2.determinant().real(), 0.0);
  return std::clamp(overlap + 2.0 * std::sqrt(d1 * d2), 0.0, 1.0);
}

}  // namespace detail

/// Two-level closed form F = tr(rho1 rho2) + 2 sqrt(det rho1 det rho2).
inline double fidelity_2x2(const DensityMatrix& rho1, const DensityMatrix& rho2,
                           const Tolerances& tol = {}) {
  const double d1 = rho1.matrix().determinant().real();
  const double d2 = rho2.matrix().determinant().real();
  if (d1 < -tol.psd || d2 < -tol.psd) {
    std::ostringstream os;
    os << "fidelity_2x2: negative determinant (" << d1 << ", " << d2 << ")";
    throw NumericalError(os.str());
  }
  return detail::fidelity_2x2_unchecked(rho1.matrix(), rho2.matrix());
}

/// e = 1 - F(rho, rho_d), in [0, 1].
inline double density_error(const DensityMatrix& rho, const DensityMatrix& rho_d,
                            const Tolerances& tol = {}) {
  return 1.0 - fidelity_2x2(rho, rho_d, tol);
}

/// -sum lambda ln lambda with 0 ln 0 = 0; eigenvalues are clamped to [0, 1].
inline double entropy_from_eigenvalues(const std::array<double, 2>& values) {
  double s = 0.0;
  for (double v : values) {
    v = std::min(v, 1.0);
    if (v > 0.0) s -= v * std::log(v);
  }
  return s;
}

/// Von Neumann entropy -tr(rho ln rho), natural log.
inline double von_neumann_entropy(const DensityMatrix& rho, const Tolerances& tol = {}) {
  const auto values = hermitian_eig(rho.matrix(), tol.herm).values;
  if (values[0] < -tol.psd) {
    std::ostringstream os;
    os << "von_neumann_entropy: eigenvalue " << values[0] << " is negative";
    throw NumericalError(os.str());
  }
  return entropy_from_eigenvalues(values);
}

inline BlochPoint bloch(const ComplexMatrix2& rho) {
  const Complex r12 = rho(0, 1);
  return {2.0 * r12.real(), 2.0 * r12.imag(), (rho(0, 0) - rho(1, 1)).real()};
}

inline BlochPoint bloch(const DensityMatrix& rho) { return bloch(rho.matrix()); }

struct ErrorDerivative {
  double edot;
  double filter_state_dot;
};

/**
 * Dirty derivative of the density error: a first-order lag x_d tracks e with
 * time constant tau_d and edot = (e - x_d) / tau_d. The lag state obeys
 * dx_d/dt = edot.
 */
inline ErrorDerivative error_derivative(double e_now, double filter_state, double tau_d) {
  const double edot = (e_now - filter_state) / tau_d;
  return {edot, edot};
}

}  // namespace qtrack
