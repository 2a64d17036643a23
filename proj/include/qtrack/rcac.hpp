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
 * @file rcac.hpp
 * @brief Continuous-time retrospective cost adaptive control of PID gains.
 *
 * The gains theta = (kp, ki, kd) minimise the exponentially forgotten cost
 *
 *   J(t, th) = int_0^t e^{-lambda (t - s)} (Rz zhat^2 + Ru (Phi th)^2) ds
 *              + e^{-lambda t} th' P0^{-1} th,
 *   zhat     = z + Phi_f th - u_f,
 *
 * where Phi = [e, gamma, edot] and Phi_f, u_f are Phi and u passed through
 * G_f(s) = 1 / (s + beta). The minimiser is propagated by the Riccati pair
 * (theta, P). RcacOracle integrates the normal equations (A, b) of the same
 * cost instead, so theta = -A^{-1} b gives an independent check.
 */
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <span>
#include <sstream>
#include <vector>

#include "qtrack/errors.hpp"

namespace qtrack {

using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;
using RowVector3 = Eigen::RowVector3d;

struct GainVector {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;

  Vector3 vec() const { return {kp, ki, kd}; }
  static GainVector from(const Vector3& v) { return {v(0), v(1), v(2)}; }
};

/// PID regressor Phi = [e, gamma, edot].
struct Regressor {
  RowVector3 phi = RowVector3::Zero();
};

inline Regressor regressor(double e, double gamma, double edot) { return {RowVector3(e, gamma, edot)}; }

/// u = Phi theta = kp e + ki gamma + kd edot.
inline double control(const Regressor& r, const GainVector& theta) { return r.phi.dot(theta.vec().transpose()); }

struct RcacConfig {
  double rz = 1.0;
  double ru = 1.0;
  Matrix3 p0 = 1e-3 * Matrix3::Identity();
  double lambda = 0.01;
  double beta = 2000.0;

  void validate() const {
    if (!(rz > 0.0) || !std::isfinite(rz)) throw ConfigError("rcac.rz must be positive");
    if (!(ru >= 0.0) || !std::isfinite(ru)) throw ConfigError("rcac.ru must be nonnegative");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("rcac.beta must be nonnegative");
    if (!std::isfinite(lambda)) throw ConfigError("rcac.lambda must be finite");
    if ((p0 - p0.transpose()).norm() > 1e-12 * (1.0 + p0.norm())) {
      throw ConfigError("rcac.p0 must be symmetric");
    }
    Eigen::LLT<Matrix3> llt(p0);
    if (llt.info() != Eigen::Success) throw ConfigError("rcac.p0 must be positive definite");
  }
};

struct ControllerState {
  GainVector theta;
  Matrix3 p = Matrix3::Identity();
  double gamma = 0.0;                   ///< integral of e
  RowVector3 x_phi = RowVector3::Zero();  ///< G_f realization state for Phi
  double x_u = 0.0;                     ///< G_f realization state for u
  double x_d = 0.0;                     ///< dirty-derivative lag state

  /// theta = 0, P = P0, filters at rest, x_d = e(0) so that edot(0) = 0.
  static ControllerState initial(const RcacConfig& cfg, double e0) {
    ControllerState st;
    st.p = cfg.p0;
    st.x_d = e0;
    return st;
  }
};

/// G_f realization (A_f, B_f, C_f, D_f) = (-beta, 1, 1, 0): dx/dt = -beta x + w.
template <class T>
T filter_dynamics(double beta, const T& state, const T& input) {
  return -beta * state + input;
}

/// zhat = z + Phi_f theta - u_f.
inline double retrospective_performance(double z, const RowVector3& phi_f, const GainVector& theta, double u_f) {
  return z + phi_f.dot(theta.vec().transpose()) - u_f;
}

struct RcacDerivatives {
  Vector3 theta_dot = Vector3::Zero();
  Matrix3 p_dot = Matrix3::Zero();
  RowVector3 x_phi_dot = RowVector3::Zero();
  double x_u_dot = 0.0;
  double gamma_dot = 0.0;
};

inline constexpr double kDivergenceGuard = 1e12;

/**
 * Time derivatives of the controller. Since D_f = 0 the filtered signals are
 * the filter states themselves: Phi_f = x_phi, u_f = x_u.
 *
 *   theta' = -P Phi_f' Rz (z + Phi_f theta - u_f) - P Phi' Ru Phi theta
 *   P'     = lambda P - P (Phi_f' Rz Phi_f + Phi' Ru Phi) P
 */
inline RcacDerivatives rcac_derivatives(const RcacConfig& cfg, const ControllerState& st, double z,
                                        const Regressor& phi, double u) {
  const Vector3 theta = st.theta.vec();
  if (!(theta.norm() <= kDivergenceGuard) || !(st.p.norm() <= kDivergenceGuard)) {
    std::ostringstream os;
    os << "rcac: divergence guard tripped (|theta| = " << theta.norm() << ", |P| = " << st.p.norm() << ")";
    throw DivergenceError(os.str());
  }
  const RowVector3& phi_f = st.x_phi;
  const double u_f = st.x_u;
  const double zhat = retrospective_performance(z, phi_f, st.theta, u_f);

  RcacDerivatives d;
  d.theta_dot = -st.p * phi_f.transpose() * (cfg.rz * zhat) - st.p * phi.phi.transpose() * (cfg.ru * phi.phi.dot(theta.transpose()));
  const Matrix3 info = cfg.rz * phi_f.transpose() * phi_f + cfg.ru * phi.phi.transpose() * phi.phi;
  d.p_dot = cfg.lambda * st.p - st.p * info * st.p;
  d.x_phi_dot = filter_dynamics(cfg.beta, st.x_phi, phi.phi);
  d.x_u_dot = filter_dynamics(cfg.beta, st.x_u, u);
  d.gamma_dot = z;
  return d;
}

/// Symmetric part (P + P') / 2.
inline Matrix3 symmetrized(const Matrix3& p) { return 0.5 * (p + p.transpose()); }

// ---------------------------------------------------------------------------
// Normal-equation oracle
// ---------------------------------------------------------------------------

/// A(t) = information matrix, b(t) = linear term of J; theta = -A^{-1} b.
struct OracleState {
  Matrix3 a = Matrix3::Identity();
  Vector3 b = Vector3::Zero();

  /// A(0) = P0^{-1}, b(0) = 0.
  static OracleState initial(const RcacConfig& cfg) { return {cfg.p0.inverse(), Vector3::Zero()}; }
};

/// Signals the oracle consumes at one right-hand-side evaluation.
struct OracleSample {
  double z = 0.0;
  RowVector3 phi = RowVector3::Zero();
  RowVector3 phi_f = RowVector3::Zero();
  double u_f = 0.0;
};

struct OracleDerivatives {
  Matrix3 a_dot;
  Vector3 b_dot;
};

/// A' = -lambda A + Phi_f' Rz Phi_f + Phi' Ru Phi,  b' = -lambda b + Phi_f' Rz (z - u_f).
inline OracleDerivatives oracle_derivatives(const RcacConfig& cfg, const OracleState& st, const OracleSample& s) {
  OracleDerivatives d;
  d.a_dot = -cfg.lambda * st.a + cfg.rz * s.phi_f.transpose() * s.phi_f + cfg.ru * s.phi.transpose() * s.phi;
  d.b_dot = -cfg.lambda * st.b + s.phi_f.transpose() * (cfg.rz * (s.z - s.u_f));
  return d;
}

inline constexpr double kOracleMaxCondition = 1e14;

/// theta = -A^{-1} b; rejects A with condition number above 1e14.
inline Vector3 oracle_theta(const OracleState& st) {
  Eigen::SelfAdjointEigenSolver<Matrix3> es(0.5 * (st.a + st.a.transpose()), Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(2);
  if (!(lo > 0.0) || hi / lo > kOracleMaxCondition) {
    std::ostringstream os;
    os << "rcac oracle: information matrix is singular (eigenvalues " << lo << " .. " << hi << ")";
    throw NumericalError(os.str());
  }
  return -st.a.ldlt().solve(st.b);
}

/// The four right-hand-side samples one classical RK4 step consumed, at
/// t, t + dt/2 (twice) and t + dt.
using OracleStep = std::array<OracleSample, 4>;

/**
 * Replays a recorded signal history through the (A, b) recursion with the
 * same RK4 tableau the closed loop used and returns theta_oracle after every
 * step (element 0 is t = 0). If `states` is given it receives (A, b) at the
 * same instants.
 */
inline std::vector<Vector3> rcac_oracle(const RcacConfig& cfg, std::span<const OracleStep> history, double dt,
                                        std::vector<OracleState>* states = nullptr) {
  OracleState st = OracleState::initial(cfg);
  std::vector<Vector3> thetas;
  thetas.reserve(history.size() + 1);
  thetas.push_back(oracle_theta(st));
  if (states) states->assign(1, st);
  static constexpr double kStageOffset[4] = {0.0, 0.5, 0.5, 1.0};
  for (const OracleStep& step : history) {
    OracleDerivatives k[4];
    for (int s = 0; s < 4; ++s) {
      OracleState stage = st;
      if (s > 0) {
        stage.a += kStageOffset[s] * dt * k[s - 1].a_dot;
        stage.b += kStageOffset[s] * dt * k[s - 1].b_dot;
      }
      k[s] = oracle_derivatives(cfg, stage, step[s]);
    }
    st.a += dt / 6.0 * (k[0].a_dot + 2.0 * k[1].a_dot + 2.0 * k[2].a_dot + k[3].a_dot);
    st.b += dt / 6.0 * (k[0].b_dot + 2.0 * k[1].b_dot + 2.0 * k[2].b_dot + k[3].b_dot);
    st.a = symmetrized(st.a);
    thetas.push_back(oracle_theta(st));
    if (states) states->push_back(st);
  }
  return thetas;
}

}  // namespace qtrack
