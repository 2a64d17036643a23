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

#include <gtest/gtest.h>

#include <cmath>

#include "qtrack/metrics.hpp"
#include "qtrack/presets.hpp"
#include "qtrack/random.hpp"

namespace qtrack {
namespace {

DensityMatrix rho0() { return DensityMatrix::from_entries(0.4, Complex(0.1, 0.3)); }
DensityMatrix ground() { return DensityMatrix::from_entries(1.0, 0.0); }
DensityMatrix excited() { return DensityMatrix::from_entries(0.0, 0.0); }
DensityMatrix mixed() { return DensityMatrix::from_entries(0.5, 0.0); }

TEST(Fidelity, IdenticalAndOrthogonal) {
  MatrixSampler sample(1);
  for (int k = 0; k < 100; ++k) {
    const DensityMatrix r = sample.density();
    EXPECT_NEAR(fidelity_2x2(r, r), 1.0, 1e-12);
    EXPECT_NEAR(fidelity_general(r, r), 1.0, 1e-9);
  }
  EXPECT_NEAR(fidelity_2x2(ground(), excited()), 0.0, 1e-15);
  EXPECT_NEAR(fidelity_general(ground(), excited()), 0.0, 1e-15);
}

TEST(Fidelity, InitialStateAgainstLowEntropyTarget) {
  const DensityMatrix target = low_entropy_preset().rho_d;
  // scipy.linalg.sqrtm evaluation of the definition
  EXPECT_NEAR(fidelity_2x2(rho0(), target), 0.678433951970, 1e-10);
  EXPECT_NEAR(fidelity_general(rho0(), target), 0.678433951970, 1e-10);
  EXPECT_NEAR(fidelity_2x2(rho0(), target), 0.6785, 1e-4);
  EXPECT_NEAR(density_error(rho0(), target), 0.3215, 1e-4);
}

TEST(Fidelity, ClosedFormMatchesDefinition) {
  MatrixSampler sample(2);
  for (int k = 0; k < 1000; ++k) {
    const DensityMatrix a = sample.density();
    const DensityMatrix b = sample.density();
    EXPECT_NEAR(fidelity_2x2(a, b), fidelity_general(a, b), 1e-10);
  }
}

// A numerically pure state has det ~ eps instead of 0, and both forms take a
// square root of it, so agreement is only good to about sqrt(eps).
TEST(Fidelity, ClosedFormMatchesDefinitionForPureStates) {
  MatrixSampler sample(12);
  for (int k = 0; k < 1000; ++k) {
    const DensityMatrix a = sample.density();
    const DensityMatrix b = sample.pure();
    EXPECT_NEAR(fidelity_2x2(a, b), fidelity_general(a, b), 1e-7);
    // for pure b the fidelity is <psi|a|psi> = tr(a b)
    EXPECT_NEAR(fidelity_2x2(a, b), (a.matrix() * b.matrix()).trace().real(), 1e-7);
  }
}

TEST(Fidelity, BoundedBeforeClamping) {
  MatrixSampler sample(3);
  for (int k = 0; k < 10000; ++k) {
    const ComplexMatrix2 a = sample.density().matrix();
    const ComplexMatrix2 b = sample.density().matrix();
    const double raw = (a * b).trace().real() + 2.0 * std::sqrt((a.determinant() * b.determinant()).real());
    EXPECT_GE(raw, -1e-9);
    EXPECT_LE(raw, 1.0 + 1e-9);
  }
}

TEST(Fidelity, Symmetric) {
  MatrixSampler sample(4);
  for (int k = 0; k < 1000; ++k) {
    const DensityMatrix a = sample.density();
    const DensityMatrix b = sample.density();
    EXPECT_NEAR(fidelity_2x2(a, b), fidelity_2x2(b, a), 1e-10);
    EXPECT_NEAR(fidelity_general(a, b), fidelity_general(b, a), 1e-10);
  }
}

TEST(Fidelity, UnityOnlyForEqualStates) {
  MatrixSampler sample(5);
  for (int k = 0; k < 2000; ++k) {
    const DensityMatrix a = sample.density();
    const DensityMatrix b = k % 2 ? a : sample.density();
    const bool unity = fidelity_2x2(a, b) >= 1.0 - 1e-12;
    EXPECT_EQ(unity, (a.matrix() - b.matrix()).norm() <= 1e-6);
  }
}

TEST(Fidelity, RejectsNegativeDeterminant) {
  ComplexMatrix2 bad;
  bad << 1.0 + 1e-6, 0.0, 0.0, -1e-6;
  // DensityMatrix with a loose PSD tolerance admits it; fidelity_2x2 must not.
  const Tolerances loose{1e-9, 1e-9, 1e-3};
  const DensityMatrix r(bad, loose);
  EXPECT_THROW(fidelity_2x2(r, mixed()), NumericalError);
}

TEST(DensityError, Examples) {
  const DensityMatrix target = low_entropy_preset().rho_d;
  EXPECT_NEAR(density_error(target, target), 0.0, 1e-12);
  EXPECT_NEAR(density_error(ground(), excited()), 1.0, 1e-15);
  EXPECT_NEAR(density_error(rho0(), target), 1.0 - 0.678433951970, 1e-10);
}

TEST(VonNeumannEntropy, PublishedTargets) {
  EXPECT_NEAR(von_neumann_entropy(low_entropy_preset().rho_d), 0.1013, 1e-3);
  EXPECT_NEAR(von_neumann_entropy(high_entropy_preset().rho_d), 0.6693, 1e-3);
  // numpy eigvalsh of the printed matrices
  EXPECT_NEAR(von_neumann_entropy(low_entropy_preset().rho_d), 0.1014069483, 1e-9);
  EXPECT_NEAR(von_neumann_entropy(high_entropy_preset().rho_d), 0.6693037666, 1e-9);
}

TEST(VonNeumannEntropy, Extremes) {
  EXPECT_EQ(von_neumann_entropy(ground()), 0.0);
  EXPECT_NEAR(von_neumann_entropy(mixed()), std::log(2.0), 1e-15);
}

TEST(VonNeumannEntropy, RangeOnRandomStates) {
  MatrixSampler sample(6);
  for (int k = 0; k < 5000; ++k) {
    const double s = von_neumann_entropy(k % 5 ? sample.density() : sample.pure());
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, std::log(2.0) + 1e-12);
  }
}

TEST(Bloch, Examples) {
  const BlochPoint north = bloch(ground());
  EXPECT_EQ(north.x, 0.0);
  EXPECT_EQ(north.y, 0.0);
  EXPECT_EQ(north.z, 1.0);
  EXPECT_EQ(bloch(mixed()).norm(), 0.0);
  const BlochPoint p = bloch(rho0());
  EXPECT_NEAR(p.x, 0.2, 1e-15);
  EXPECT_NEAR(p.y, 0.6, 1e-15);
  EXPECT_NEAR(p.z, -0.2, 1e-15);
}

TEST(Bloch, NormBoundAndPureStatesOnSurface) {
  MatrixSampler sample(7);
  for (int k = 0; k < 5000; ++k) {
    const DensityMatrix r = k % 3 ? sample.density() : sample.pure();
    const double n = bloch(r).norm();
    const bool pure = r.matrix().determinant().real() <= 1e-9;
    EXPECT_LE(n, 1.0 + 1e-9);
    EXPECT_EQ(std::abs(n - 1.0) <= 1e-9, pure) << "det = " << r.matrix().determinant().real();
  }
}

TEST(ErrorDerivative, Examples) {
  EXPECT_EQ(error_derivative(0.3, 0.3, 0.01).edot, 0.0);
  const auto d = error_derivative(0.25 + 0.01, 0.25, 0.01);
  EXPECT_NEAR(d.edot, 1.0, 1e-12);
  EXPECT_EQ(d.edot, d.filter_state_dot);
}

TEST(ErrorDerivative, RampSettlesToUnitSlope) {
  // e(t) = t, x_d(0) = 0: exact edot(t) = 1 - exp(-t / tau), so after 5 tau
  // the estimate is 1 - e^-5 = 0.99326.
  const double tau = 0.01;
  const double dt = 1e-5;
  double x = 0.0;
  double t = 0.0;
  for (int k = 0; k < 5000; ++k) {
    // midpoint rule on the lag dynamics
    const double half = x + 0.5 * dt * error_derivative(t, x, tau).filter_state_dot;
    x += dt * error_derivative(t + 0.5 * dt, half, tau).filter_state_dot;
    t += dt;
  }
  const double edot = error_derivative(t, x, tau).edot;
  EXPECT_NEAR(edot, 1.0, 0.01);
  EXPECT_NEAR(edot, 1.0 - std::exp(-5.0), 1e-6);
}

}  // namespace
}  // namespace qtrack
