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

#include <cstdint>
#include <random>

#include "qtrack/quantum_core.hpp"

namespace qtrack {

/// Random 2x2 test matrices from a caller-owned engine.
class MatrixSampler {
 public:
  explicit MatrixSampler(std::uint64_t seed) : rng_(seed) {}

  /// Entries with real and imaginary parts uniform in [-1, 1].
  ComplexMatrix2 general() {
    ComplexMatrix2 m;
    for (int k = 0; k < 4; ++k) m(k) = Complex(unit_(rng_), unit_(rng_));
    return m;
  }

  ComplexMatrix2 hermitian() { return hermitian_part(general()); }

  /// G G^H for a random G: Hermitian PSD, full rank almost surely.
  ComplexMatrix2 psd() {
    const ComplexMatrix2 g = general();
    return hermitian_part(g * g.adjoint());
  }

  /// Density matrix from a Bloch vector drawn uniformly in the unit ball.
  DensityMatrix density() {
    double x, y, z;
    do {
      x = unit_(rng_);
      y = unit_(rng_);
      z = unit_(rng_);
    } while (x * x + y * y + z * z > 1.0);
    return DensityMatrix::from_entries(0.5 * (1.0 + z), Complex(0.5 * x, 0.5 * y));
  }

  /// Pure state |psi><psi| for a random unit vector.
  DensityMatrix pure() {
    ComplexVector2 v(Complex(unit_(rng_), unit_(rng_)), Complex(unit_(rng_), unit_(rng_)));
    v.normalize();
    ComplexMatrix2 m = v * v.adjoint();
    m = hermitian_part(m);
    m(1, 1) = Complex(1.0 - m(0, 0).real());
    return DensityMatrix(m);
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> unit_{-1.0, 1.0};
};

}  // namespace qtrack
