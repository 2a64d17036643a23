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
 * @file sim.hpp
 * @brief Closed-loop simulation: Lindblad plant + fidelity error + adaptive
 * PID with RCAC gain updates, integrated by fixed-step classical RK4.
 *
 * The full state is one 26-vector:
 *
 *   [ Re rho (4) | Im rho (4) | gamma | x_d | x_phi (3) | x_u | theta (3) | P (9) ]
 *
 * with the 2x2 blocks stored row-major. After each step rho is projected onto
 * its Hermitian part and P is symmetrised; the trace is never renormalised.
 */
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <vector>

#include "qtrack/errors.hpp"
#include "qtrack/lindblad.hpp"
#include "qtrack/metrics.hpp"
#include "qtrack/quantum_core.hpp"
#include "qtrack/rcac.hpp"

namespace qtrack {

inline constexpr int kStateSize = 26;
using StateVector = Eigen::Matrix<double, kStateSize, 1>;

namespace layout {
inline constexpr int kRhoRe = 0;
inline constexpr int kRhoIm = 4;
inline constexpr int kGamma = 8;
inline constexpr int kXd = 9;
inline constexpr int kXphi = 10;
inline constexpr int kXu = 13;
inline constexpr int kTheta = 14;
inline constexpr int kP = 17;
}  // namespace layout

struct SimConfig {
  explicit SimConfig(DensityMatrix target) : rho_d(std::move(target)) {}

  double dt = 1e-4;
  double t_final = 200.0;
  int record_every = 100;
  DensityMatrix rho_d;
  double tau_d = 0.01;
  Tolerances tol;
  /// When set, u is held at this constant and the gains are not used.
  std::optional<double> open_loop_u;

  void validate(const RcacConfig& rcac) const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("sim.dt must be positive");
    if (!(t_final >= dt) || !std::isfinite(t_final)) throw ConfigError("sim.t_final must be at least sim.dt");
    if (record_every < 1) throw ConfigError("sim.record_every must be a positive integer");
    if (!(tau_d > 0.0) || !std::isfinite(tau_d)) throw ConfigError("sim.tau_d must be positive");
    if (rcac.beta * dt > 2.5) throw ConfigError("rcac.beta * sim.dt exceeds the RK4 stability margin of 2.5");
    if (open_loop_u && !std::isfinite(*open_loop_u)) throw ConfigError("open-loop u must be finite");
  }
};

struct SimState {
  ComplexMatrix2 rho = ComplexMatrix2::Zero();
  ControllerState ctrl;

  StateVector to_vector() const {
    StateVector s;
    for (int k = 0; k < 4; ++k) {
      s(layout::kRhoRe + k) = rho(k / 2, k % 2).real();
      s(layout::kRhoIm + k) = rho(k / 2, k % 2).imag();
    }
    s(layout::kGamma) = ctrl.gamma;
    s(layout::kXd) = ctrl.x_d;
    s.segment<3>(layout::kXphi) = ctrl.x_phi.transpose();
    s(layout::kXu) = ctrl.x_u;
    s.segment<3>(layout::kTheta) = ctrl.theta.vec();
    s.segment<9>(layout::kP) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(ctrl.p.data());
    return s;
  }

  static SimState from_vector(const StateVector& s) {
    SimState st;
    for (int k = 0; k < 4; ++k) {
      st.rho(k / 2, k % 2) = Complex(s(layout::kRhoRe + k), s(layout::kRhoIm + k));
    }
    st.ctrl.gamma = s(layout::kGamma);
    st.ctrl.x_d = s(layout::kXd);
    st.ctrl.x_phi = s.segment<3>(layout::kXphi).transpose();
    st.ctrl.x_u = s(layout::kXu);
    st.ctrl.theta = GainVector::from(s.segment<3>(layout::kTheta));
    st.ctrl.p = Eigen::Map<const Matrix3>(s.segment<9>(layout::kP).data());
    return st;
  }
};

/// Everything the loop computes from the state before differentiating it.
struct LoopSignals {
  double e = 0.0;
  double edot = 0.0;
  Regressor phi;
  double u = 0.0;
};

inline LoopSignals loop_signals(const SimConfig& scfg, const SimState& st) {
  LoopSignals sig;
  sig.e = 1.0 - detail::fidelity_2x2_unchecked(st.rho, scfg.rho_d.matrix());
  sig.edot = error_derivative(sig.e, st.ctrl.x_d, scfg.tau_d).edot;
  sig.phi = regressor(sig.e, st.ctrl.gamma, sig.edot);
  sig.u = scfg.open_loop_u ? *scfg.open_loop_u : control(sig.phi, st.ctrl.theta);
  return sig;
}

/**
 * Derivative of the flattened closed-loop state. If `capture` is non-null the
 * signals the gain update consumed are written to it (for the RCAC oracle).
 */
inline StateVector coupled_rhs(const PlantConfig& plant, const RcacConfig& rcac, const SimConfig& scfg,
                               const StateVector& s, OracleSample* capture = nullptr) {
  if (!s.allFinite()) throw DivergenceError("coupled_rhs: non-finite state");
  const SimState st = SimState::from_vector(s);
  const LoopSignals sig = loop_signals(scfg, st);
  const double z = sig.e;

  const ComplexMatrix2 rho_dot = lgks_rhs(plant, st.rho, sig.u);
  const ErrorDerivative ed = error_derivative(sig.e, st.ctrl.x_d, scfg.tau_d);
  const RcacDerivatives rd = rcac_derivatives(rcac, st.ctrl, z, sig.phi, sig.u);

  StateVector out;
  for (int k = 0; k < 4; ++k) {
    out(layout::kRhoRe + k) = rho_dot(k / 2, k % 2).real();
    out(layout::kRhoIm + k) = rho_dot(k / 2, k % 2).imag();
  }
  out(layout::kGamma) = rd.gamma_dot;
  out(layout::kXd) = ed.filter_state_dot;
  out.segment<3>(layout::kXphi) = rd.x_phi_dot.transpose();
  out(layout::kXu) = rd.x_u_dot;
  out.segment<3>(layout::kTheta) = rd.theta_dot;
  out.segment<9>(layout::kP) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(rd.p_dot.data());

  if (capture != nullptr) {
    capture->z = z;
    capture->phi = sig.phi.phi;
    capture->phi_f = st.ctrl.x_phi;
    capture->u_f = st.ctrl.x_u;
  }
  return out;
}

/// One classical 4-stage Runge-Kutta step; f(x, stage) -> dx/dt.
template <class Vec, class Rhs>
Vec rk4_step(Rhs&& f, const Vec& x, double dt) {
  const Vec k1 = f(x, 0);
  const Vec k2 = f(Vec(x + 0.5 * dt * k1), 1);
  const Vec k3 = f(Vec(x + 0.5 * dt * k2), 2);
  const Vec k4 = f(Vec(x + dt * k3), 3);
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// One logged sample of the closed loop.
struct TrajectoryRecord {
  double t = 0.0;
  double e = 0.0;
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double u = 0.0;
  double re_rho11 = 0.0;
  double re_rho12 = 0.0;
  double im_rho12 = 0.0;
  double re_rho22 = 0.0;
  double entropy = 0.0;
  double bloch_x = 0.0;
  double bloch_y = 0.0;
  double bloch_z = 0.0;
  double trace_residual = 0.0;  ///< |tr rho - 1|
  double herm_residual = 0.0;   ///< ||rho - rho^H||_F of the last step, before projection
  double min_eig_rho = 0.0;

  /// Density matrix rebuilt from the logged entries.
  ComplexMatrix2 rho() const {
    ComplexMatrix2 m;
    m << Complex(re_rho11), Complex(re_rho12, im_rho12), Complex(re_rho12, -im_rho12), Complex(re_rho22);
    return m;
  }
};

/// Divergence during simulate(); carries the last record that was still finite.
class SimulationDiverged : public DivergenceError {
 public:
  SimulationDiverged(const std::string& what, TrajectoryRecord last_valid)
      : DivergenceError(what), last_valid_(last_valid) {}
  const TrajectoryRecord& last_valid() const { return last_valid_; }

 private:
  TrajectoryRecord last_valid_;
};

/// Stepwise driver for the closed loop. Owns its state; not shareable.
class ClosedLoop {
 public:
  ClosedLoop(PlantConfig plant, RcacConfig rcac, SimConfig scfg)
      : plant_(std::move(plant)), rcac_(std::move(rcac)), scfg_(std::move(scfg)) {
    plant_.validate(scfg_.tol);
    rcac_.validate();
    scfg_.validate(rcac_);
    SimState st;
    st.rho = plant_.rho0.matrix();
    const double e0 = 1.0 - detail::fidelity_2x2_unchecked(st.rho, scfg_.rho_d.matrix());
    st.ctrl = ControllerState::initial(rcac_, e0);
    state_ = st.to_vector();
    herm_residual_ = hermiticity_residual(st.rho);
  }

  double time() const { return time_; }
  const StateVector& vector() const { return state_; }
  SimState state() const { return SimState::from_vector(state_); }
  const SimConfig& sim_config() const { return scfg_; }

  /// Advances by h (defaults to dt). Optionally captures the four stage
  /// samples the gain update consumed.
  void step(double h, OracleStep* capture = nullptr) {
    auto f = [&](const StateVector& x, int stage) {
      return coupled_rhs(plant_, rcac_, scfg_, x, capture ? &(*capture)[stage] : nullptr);
    };
    StateVector next = rk4_step(f, state_, h);
    if (!next.allFinite()) throw DivergenceError("closed loop: non-finite state after step");

    ComplexMatrix2 rho;
    for (int k = 0; k < 4; ++k) {
      rho(k / 2, k % 2) = Complex(next(layout::kRhoRe + k), next(layout::kRhoIm + k));
    }
    herm_residual_ = hermiticity_residual(rho);
    const ComplexMatrix2 projected = hermitian_part(rho);
    for (int k = 0; k < 4; ++k) {
      next(layout::kRhoRe + k) = projected(k / 2, k % 2).real();
      next(layout::kRhoIm + k) = projected(k / 2, k % 2).imag();
    }
    Eigen::Map<Matrix3> p(next.data() + layout::kP);
    p = symmetrized(Matrix3(p));

    state_ = next;
    time_ += h;
  }

  void step() { step(scfg_.dt); }

  /// Pins the clock to an exact value (used to land on t_final).
  void set_time(double t) { time_ = t; }

  TrajectoryRecord record() const {
    const SimState st = state();
    const LoopSignals sig = loop_signals(scfg_, st);
    const auto eig = detail::hermitian_eigenvalues_unchecked(st.rho);
    const BlochPoint b = bloch(st.rho);
    TrajectoryRecord r;
    r.t = time_;
    r.e = sig.e;
    r.kp = st.ctrl.theta.kp;
    r.ki = st.ctrl.theta.ki;
    r.kd = st.ctrl.theta.kd;
    r.u = sig.u;
    r.re_rho11 = st.rho(0, 0).real();
    r.re_rho12 = st.rho(0, 1).real();
    r.im_rho12 = st.rho(0, 1).imag();
    r.re_rho22 = st.rho(1, 1).real();
    r.entropy = entropy_from_eigenvalues(eig);
    r.bloch_x = b.x;
    r.bloch_y = b.y;
    r.bloch_z = b.z;
    r.trace_residual = std::abs(st.rho.trace() - Complex(1.0));
    r.herm_residual = herm_residual_;
    r.min_eig_rho = eig[0];
    return r;
  }

 private:
  PlantConfig plant_;
  RcacConfig rcac_;
  SimConfig scfg_;
  StateVector state_;
  double time_ = 0.0;
  double herm_residual_ = 0.0;
};

/// Number of steps to reach t_final; the last one is shortened if t_final is
/// not a multiple of dt.
inline std::size_t step_count(const SimConfig& scfg) {
  return static_cast<std::size_t>(std::ceil(scfg.t_final / scfg.dt - 1e-9));
}

/// Runs the closed loop for t_final seconds. Throws SimulationDiverged with
/// the last finite record on NaN/Inf or a tripped divergence guard.
inline std::vector<TrajectoryRecord> simulate(const PlantConfig& plant, const RcacConfig& rcac,
                                              const SimConfig& scfg) {
  ClosedLoop loop(plant, rcac, scfg);
  const std::size_t n = step_count(scfg);
  std::vector<TrajectoryRecord> records;
  records.reserve(n / static_cast<std::size_t>(scfg.record_every) + 2);
  records.push_back(loop.record());
  for (std::size_t k = 1; k <= n; ++k) {
    const double t_next = k == n ? scfg.t_final : static_cast<double>(k) * scfg.dt;
    try {
      loop.step(t_next - loop.time());
    } catch (const DivergenceError& err) {
      throw SimulationDiverged(err.what(), records.back());
    }
    loop.set_time(t_next);
    if (k % static_cast<std::size_t>(scfg.record_every) == 0 || k == n) {
      records.push_back(loop.record());
    }
  }
  return records;
}

/// Closed-loop run over [0, horizon] that also keeps the per-step oracle
/// signals and the Riccati gains after every step.
struct OracleRun {
  std::vector<OracleStep> history;
  std::vector<Vector3> theta;  ///< theta after each step; element 0 is t = 0
  std::vector<Matrix3> p;      ///< P at the same instants
  double dt = 0.0;
};

inline OracleRun simulate_with_oracle_history(const PlantConfig& plant, const RcacConfig& rcac, SimConfig scfg,
                                              double horizon) {
  scfg.t_final = horizon;
  ClosedLoop loop(plant, rcac, scfg);
  const std::size_t n = step_count(scfg);
  OracleRun run;
  run.dt = scfg.dt;
  run.history.resize(n);
  run.theta.reserve(n + 1);
  run.p.reserve(n + 1);
  auto keep = [&] {
    const SimState st = loop.state();
    run.theta.push_back(st.ctrl.theta.vec());
    run.p.push_back(st.ctrl.p);
  };
  keep();
  for (std::size_t k = 0; k < n; ++k) {
    loop.step(scfg.dt, &run.history[k]);
    keep();
  }
  return run;
}

}  // namespace qtrack
