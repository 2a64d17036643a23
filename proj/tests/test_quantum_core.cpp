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

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "qtrack/quantum_core.hpp"
#include "qtrack/random.hpp"

namespace qtrack {
namespace {

constexpr Complex kI(0.0, 1.0);

ComplexMatrix2 mat(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix2 m;
  m << a, b, c, d;
  return m;
}

TEST(ConjugateTranspose, Examples) {
  EXPECT_EQ(conjugate_transpose(ComplexMatrix2::Identity()), ComplexMatrix2::Identity());
  EXPECT_EQ(conjugate_transpose(mat(0, kI, 0, 0)), mat(0, 0, -kI, 0));
  const ComplexMatrix2 h = mat(2.0, Complex(1, -3), Complex(1, 3), -1.0);
  EXPECT_EQ(conjugate_transpose(h), h);
}

TEST(Commutator, Examples) {
  const ComplexMatrix2 a = mat(1, 2, kI, 4);
  EXPECT_EQ(commutator(a, a), ComplexMatrix2::Zero());
  // [diag(1,-1), sigma_x] by hand: [[0, 1], [-1, 0]] - [[0, -1], [1, 0]].
  EXPECT_EQ(commutator(mat(1, 0, 0, -1), mat(0, 1, 1, 0)), mat(0, 2, -2, 0));
}

TEST(Anticommutator, Examples) {
  const ComplexMatrix2 a = mat(1, 2, kI, 4);
  const ComplexMatrix2 b = mat(-kI, 0.5, 3, 1);
  EXPECT_EQ(anticommutator(a, ComplexMatrix2::Zero()), ComplexMatrix2::Zero());
  EXPECT_EQ(anticommutator(mat(0, 0, 0, 1), mat(0, 0, 0, 1)), mat(0, 0, 0, 2));
  EXPECT_TRUE(anticommutator(a, b).isApprox(anticommutator(b, a), 0.0));
}

TEST(HermitianEig, Diagonal) {
  const auto eig = hermitian_eig(mat(0.7, 0, 0, 0.3));
  EXPECT_DOUBLE_EQ(eig.values[0], 0.3);
  EXPECT_DOUBLE_EQ(eig.values[1], 0.7);
}

TEST(HermitianEig, DegenerateReturnsStandardBasis) {
  const auto eig = hermitian_eig(0.5 * ComplexMatrix2::Identity());
  EXPECT_DOUBLE_EQ(eig.values[0], 0.5);
  EXPECT_DOUBLE_EQ(eig.values[1], 0.5);
  EXPECT_EQ(eig.vectors, ComplexMatrix2::Identity());
}

TEST(HermitianEig, LowEntropyTarget) {
  const auto eig = hermitian_eig(mat(0.8571, Complex(0.2857, 0.1429), Complex(0.2857, -0.1429), 0.1429));
  // numpy.linalg.eigvalsh on the same matrix
  EXPECT_NEAR(eig.values[0], 0.02087026, 1e-8);
  EXPECT_NEAR(eig.values[1], 0.97912974, 1e-8);
}

TEST(HermitianEig, RejectsNonHermitian) {
  EXPECT_THROW(hermitian_eig(mat(1, 1, 0, 1)), NumericalError);
  EXPECT_NO_THROW(hermitian_eig(mat(1, Complex(1, 1e-12), Complex(1, 0), 1)));
}

TEST(HermitianEig, MatchesReferenceSolverAndReconstructs) {
  MatrixSampler sample(7);
  for (int k = 0; k < 2000; ++k) {
    const ComplexMatrix2 a = k % 2 ? sample.hermitian() : sample.psd();
    const auto eig = hermitian_eig(a);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix2> ref(a);
    EXPECT_NEAR(eig.values[0], ref.eigenvalues()(0), 1e-13);
    EXPECT_NEAR(eig.values[1], ref.eigenvalues()(1), 1e-13);
    const Eigen::Vector2d lam(eig.values[0], eig.values[1]);
    EXPECT_LE((eig.vectors * lam.cast<Complex>().asDiagonal() * eig.vectors.adjoint() - a).norm(), 1e-12);
    EXPECT_LE((eig.vectors.adjoint() * eig.vectors - ComplexMatrix2::Identity()).norm(), 1e-13);
    for (int c = 0; c < 2; ++c) {
      EXPECT_LE((a * eig.vectors.col(c) - eig.values[c] * eig.vectors.col(c)).norm(), 1e-12);
    }
  }
}

TEST(HermitianEig, PureStateSmallEigenvalueKeepsRelativeAccuracy) {
  // eigenvalues 1 - 1e-13 and 1e-13, rotated off-diagonal
  const double small = 1e-13;
  ComplexVector2 v(Complex(0.6, 0.0), Complex(0.0, 0.8));
  ComplexVector2 w(Complex(0.0, 0.8), Complex(0.6, 0.0));
  const ComplexMatrix2 a = (1.0 - small) * v * v.adjoint() + small * w * w.adjoint();
  EXPECT_NEAR(hermitian_eig(a).values[0], small, 1e-15);
}

TEST(SqrtPsd, Examples) {
  EXPECT_TRUE(sqrt_psd(mat(4, 0, 0, 9)).isApprox(mat(2, 0, 0, 3), 1e-15));
  EXPECT_TRUE(sqrt_psd(ComplexMatrix2::Identity()).isApprox(ComplexMatrix2::Identity(), 1e-15));
}

TEST(SqrtPsd, ClampsTinyNegativeAndRejectsLarge) {
  EXPECT_TRUE(sqrt_psd(mat(1, 0, 0, -5e-10)).isApprox(mat(1, 0, 0, 0), 1e-15));
  EXPECT_THROW(sqrt_psd(mat(1, 0, 0, -1e-6)), NumericalError);
}

TEST(SqrtPsd, SquaresBackAndMatchesMatrixFunction) {
  MatrixSampler sample(11);
  for (int k = 0; k < 1000; ++k) {
    const ComplexMatrix2 a = sample.psd();
    const ComplexMatrix2 r = sqrt_psd(a);
    EXPECT_LE((r * r - a).norm(), 1e-10);
    EXPECT_LE(hermiticity_residual(r), 1e-15);
    EXPECT_GE(hermitian_eig(r).values[0], -1e-15);
    const ComplexMatrix2 ref = a.sqrt();
    EXPECT_LE((r - ref).norm(), 1e-8);
  }
}

// Algebraic closure facts used by the Lindblad generator.
TEST(HermitianClosure, CommutatorTimesMinusI) {
  MatrixSampler sample(101);
  for (int k = 0; k < 10000; ++k) {
    EXPECT_LE(hermiticity_residual(-kI * commutator(sample.hermitian(), sample.hermitian())), 1e-14);
  }
}

TEST(HermitianClosure, GramProducts) {
  MatrixSampler sample(102);
  for (int k = 0; k < 10000; ++k) {
    const ComplexMatrix2 u = sample.general();
    EXPECT_LE(hermiticity_residual(u.adjoint() * u), 1e-14);
    EXPECT_LE(hermiticity_residual(u * u.adjoint()), 1e-14);
  }
}

TEST(HermitianClosure, CongruenceWithArbitraryU) {
  MatrixSampler sample(103);
  for (int k = 0; k < 10000; ++k) {
    const ComplexMatrix2 a = sample.hermitian();
    const ComplexMatrix2 u = sample.general();
    EXPECT_LE(hermiticity_residual(u * a * u.adjoint()), 1e-14);
  }
}

TEST(DensityMatrix, ValidatesInvariants) {
  EXPECT_NO_THROW(DensityMatrix(mat(0.4, Complex(0.1, 0.3), Complex(0.1, -0.3), 0.6)));
  EXPECT_THROW(DensityMatrix(mat(0.4, Complex(0.1, 0.3), Complex(0.1, 0.3), 0.6)), NumericalError);
  EXPECT_THROW(DensityMatrix(mat(0.5, 0, 0, 0.6)), NumericalError);
  EXPECT_THROW(DensityMatrix(mat(1.2, 0, 0, -0.2)), NumericalError);
  EXPECT_THROW(DensityMatrix(mat(0.5, 0.6, 0.6, 0.5)), NumericalError);
  EXPECT_NO_THROW(DensityMatrix(mat(1.0, 0, 0, 0)));
}

}  // namespace
}  // namespace qtrack
