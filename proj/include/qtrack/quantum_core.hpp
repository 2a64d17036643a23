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
 * @file quantum_core.hpp
 * @brief Closed-form 2x2 complex algebra for two-level density matrices.
 *
 * Everything here is specialised to 2x2: the Hermitian eigenproblem is the
 * quadratic formula and the PSD square root is assembled from it. No general
 * n x n routines are provided.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <sstream>

#include "qtrack/errors.hpp"

namespace qtrack {

using Complex = std::complex<double>;
using ComplexMatrix2 = Eigen::Matrix2cd;
using ComplexVector2 = Eigen::Vector2cd;

/// Acceptance thresholds for the density-matrix invariants.
struct Tolerances {
  double herm = 1e-9;   ///< ||m - m^H||_F
  double trace = 1e-9;  ///< |tr m - 1|
  double psd = 1e-9;    ///< allowed negative eigenvalue magnitude
};

inline ComplexMatrix2 conjugate_transpose(const ComplexMatrix2& a) { return a.adjoint(); }

inline ComplexMatrix2 commutator(const ComplexMatrix2& a, const ComplexMatrix2& b) {
  return a * b - b * a;
}

inline ComplexMatrix2 anticommutator(const ComplexMatrix2& a, const ComplexMatrix2& b) {
  return a * b + b * a;
}

/// Frobenius norm of the anti-Hermitian part, ||a - a^H||_F.
inline double hermiticity_residual(const ComplexMatrix2& a) { return (a - a.adjoint()).norm(); }

inline ComplexMatrix2 hermitian_part(const ComplexMatrix2& a) { return 0.5 * (a + a.adjoint()); }

inline bool all_finite(const ComplexMatrix2& a) {
  for (Eigen::Index k = 0; k < 4; ++k) {
    const Complex z = a(k);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

struct HermitianEigen {
  std::array<double, 2> values;   ///< ascending
  Eigen::Matrix2cd vectors;       ///< column k pairs with values[k]
};

namespace detail {

// Eigenvalues of the Hermitian part of a, ascending. The smaller root is
// recovered from det/lambda_max when that is better conditioned, which keeps
// the tiny eigenvalue of a near-pure state accurate to relative precision.
inline std::array<double, 2> hermitian_eigenvalues_unchecked(const ComplexMatrix2& a) {
  const double p = a(0, 0).real();
  const double r = a(1, 1).real();
  const Complex q = 0.5 * (a(0, 1) + std::conj(a(1, 0)));
  const double mean = 0.5 * (p + r);
  const double half_gap = 0.5 * (p - r);
  const double disc = std::hypot(half_gap, std::abs(q));
  double lo = mean - disc;
  double hi = mean + disc;
  const double det = p * r - std::norm(q);
  if (mean > 0.0 && hi > 0.0 && std::abs(lo) < 0.5 * hi) {
    lo = det / hi;
  } else if (mean < 0.0 && lo < 0.0 && std::abs(hi) < 0.5 * std::abs(lo)) {
    hi = det / lo;
  }
  return {lo, hi};
}

inline void require_hermitian(const ComplexMatrix2& a, double tol, const char* who) {
  if (!all_finite(a)) {
    throw NumericalError(std::string(who) + ": non-finite matrix entry");
  }
  const double res = hermiticity_residual(a);
  if (res > tol) {
    std::ostringstream os;
    os << who << ": matrix is not Hermitian (||a - a^H||_F = " << res << ")";
    throw NumericalError(os.str());
  }
}

}  // namespace detail

/**
 * @brief Eigendecomposition of a Hermitian 2x2 matrix.
 *
 * Eigenvalues come from the quadratic (trace/2 +- sqrt of the discriminant).
 * When the discriminant vanishes (< 1e-14) the matrix is scalar and the
 * standard basis is returned.
 */
inline HermitianEigen hermitian_eig(const ComplexMatrix2& a, double tol_herm = Tolerances{}.herm) {
  detail::require_hermitian(a, tol_herm, "hermitian_eig");
  HermitianEigen out;
  out.values = detail::hermitian_eigenvalues_unchecked(a);

  const double p = a(0, 0).real();
  const double r = a(1, 1).real();
  const Complex q = 0.5 * (a(0, 1) + std::conj(a(1, 0)));
  const double disc = std::hypot(0.5 * (p - r), std::abs(q));
  if (disc < 1e-14) {
    out.vectors = Eigen::Matrix2cd::Identity();
    return out;
  }

  // Eigenvector for the larger eigenvalue, built from whichever row of
  // (a - lambda I) is better conditioned; the other column is its orthogonal
  // complement, which is exact for a 2x2 Hermitian matrix.
  const double hi = out.values[1];
  ComplexVector2 v;
  if (std::abs(hi - r) >= std::abs(hi - p)) {
    v << Complex(hi - r), std::conj(q);
  } else {
    v << q, Complex(hi - p);
  }
  v.normalize();
  ComplexVector2 w;
  w << -std::conj(v(1)), std::conj(v(0));
  out.vectors.col(0) = w;
  out.vectors.col(1) = v;
  return out;
}

/**
 * @brief Principal square root of a Hermitian PSD matrix.
 *
 * Eigenvalues in [-tol_psd, 0) are clamped to 0; anything more negative is
 * rejected.
 */
inline ComplexMatrix2 sqrt_psd(const ComplexMatrix2& a, const Tolerances& tol = {}) {
  const HermitianEigen eig = hermitian_eig(a, tol.herm);
  if (eig.values[0] < -tol.psd) {
    std::ostringstream os;
    os << "sqrt_psd: eigenvalue " << eig.values[0] << " is below -" << tol.psd;
    throw NumericalError(os.str());
  }
  Eigen::Vector2d roots;
  roots << std::sqrt(std::max(eig.values[0], 0.0)), std::sqrt(std::max(eig.values[1], 0.0));
  const ComplexMatrix2 root = eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  return hermitian_part(root);
}

/// Hermitian, unit-trace, positive semidefinite 2x2 matrix.
class DensityMatrix {
 public:
  /// Validates all three invariants; throws NumericalError on violation.
  explicit DensityMatrix(const ComplexMatrix2& m, const Tolerances& tol = {}) : m_(m) {
    detail::require_hermitian(m, tol.herm, "DensityMatrix");
    const double trace_res = std::abs(m.trace() - Complex(1.0));
    if (trace_res > tol.trace) {
      std::ostringstream os;
      os << "DensityMatrix: |tr(m) - 1| = " << trace_res;
      throw NumericalError(os.str());
    }
    const double min_eig = detail::hermitian_eigenvalues_unchecked(m)[0];
    if (min_eig < -tol.psd) {
      std::ostringstream os;
      os << "DensityMatrix: minimum eigenvalue " << min_eig << " is negative";
      throw NumericalError(os.str());
    }
  }

  /// rho = [[rho11, rho12], [conj(rho12), 1 - rho11]].
  static DensityMatrix from_entries(double rho11, Complex rho12) {
    ComplexMatrix2 m;
    m << Complex(rho11), rho12, std::conj(rho12), Complex(1.0 - rho11);
    return DensityMatrix(m);
  }

  const ComplexMatrix2& matrix() const { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  ComplexMatrix2 m_;
};

}  // namespace qtrack
