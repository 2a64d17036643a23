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
 * @file verify.hpp
 * @brief Runtime self-check used by `qtrack verify`: algebraic invariants,
 * fidelity cross-check, plant conservation, preset sanity and the RCAC
 * normal-equation oracle on a short closed-loop run.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "qtrack/config.hpp"
#include "qtrack/lindblad.hpp"
#include "qtrack/metrics.hpp"
#include "qtrack/presets.hpp"
#include "qtrack/random.hpp"
#include "qtrack/rcac.hpp"
#include "qtrack/sim.hpp"

namespace qtrack {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  /// Horizon of the closed-loop oracle check, seconds.
  double oracle_horizon = 10.0;
  int random_draws = 10000;
  std::uint64_t seed = 20240601;
};

namespace detail {

inline CheckResult max_below(std::string name, double worst, double limit) {
  std::ostringstream os;
  os << "max " << worst << " (limit " << limit << ")";
  return {std::move(name), worst <= limit, os.str()};
}

}  // namespace detail

inline std::vector<CheckResult> run_verification(const VerifyOptions& opt = {}) {
  std::vector<CheckResult> out;
  MatrixSampler sample(opt.seed);
  constexpr Complex kI(0.0, 1.0);

  {
    double f1 = 0.0, f2 = 0.0, f3 = 0.0;
    for (int k = 0; k < opt.random_draws; ++k) {
      const ComplexMatrix2 a = sample.hermitian();
      const ComplexMatrix2 b = sample.hermitian();
      const ComplexMatrix2 u = sample.general();
      f1 = std::max(f1, hermiticity_residual(-kI * commutator(a, b)));
      f2 = std::max({f2, hermiticity_residual(u.adjoint() * u), hermiticity_residual(u * u.adjoint())});
      f3 = std::max(f3, hermiticity_residual(u * a * u.adjoint()));
    }
    out.push_back(detail::max_below("-i[A,B] Hermitian", f1, 1e-14));
    out.push_back(detail::max_below("U^H U and U U^H Hermitian", f2, 1e-14));
    out.push_back(detail::max_below("U A U^H Hermitian", f3, 1e-14));
  }

  {
    double eig_err = 0.0, sqrt_err = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const ComplexMatrix2 a = sample.psd();
      const HermitianEigen eig = hermitian_eig(a);
      const Eigen::Vector2d lam(eig.values[0], eig.values[1]);
      eig_err = std::max(eig_err, (eig.vectors * lam.cast<Complex>().asDiagonal() * eig.vectors.adjoint() - a).norm());
      const ComplexMatrix2 r = sqrt_psd(a);
      sqrt_err = std::max(sqrt_err, (r * r - a).norm());
    }
    out.push_back(detail::max_below("hermitian_eig reconstruction", eig_err, 1e-12));
    out.push_back(detail::max_below("sqrt_psd squared", sqrt_err, 1e-10));
  }

  {
    double gap = 0.0, excess = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const DensityMatrix r1 = sample.density();
      const DensityMatrix r2 = sample.density();
      const double fc = fidelity_2x2(r1, r2);
      const double fg = fidelity_general(r1, r2);
      gap = std::max(gap, std::abs(fc - fg));
      const double raw = (r1.matrix() * r2.matrix()).trace().real() +
                         2.0 * std::sqrt(std::max(0.0, (r1.matrix().determinant() * r2.matrix().determinant()).real()));
      excess = std::max({excess, -raw, raw - 1.0});
    }
    out.push_back(detail::max_below("fidelity closed form vs definition", gap, 1e-10));
    out.push_back(detail::max_below("fidelity outside [0,1]", std::max(excess, 0.0), 1e-9));
  }

  {
    const PlantConfig plant = default_plant();
    double tr = 0.0, herm = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const ComplexMatrix2 rho = sample.hermitian();
      const ComplexMatrix2 d = lgks_rhs(plant, rho, sample.uniform(-20.0, 20.0));
      tr = std::max(tr, std::abs(d.trace()));
      herm = std::max(herm, hermiticity_residual(d));
    }
    out.push_back(detail::max_below("Lindblad generator traceless", tr, 1e-14));
    out.push_back(detail::max_below("Lindblad generator Hermitian", herm, 1e-14));
  }

  for (const ScenarioPreset& preset : {low_entropy_preset(), high_entropy_preset()}) {
    out.push_back(detail::max_below("equilibrium residual " + preset.name,
                                    equilibrium_residual(default_plant(), preset.rho_d, preset.equilibrium_u), 1e-3));
  }
  out.push_back(detail::max_below("entropy low_entropy target",
                                  std::abs(von_neumann_entropy(low_entropy_preset().rho_d) - 0.1013), 1e-3));
  out.push_back(detail::max_below("entropy high_entropy target",
                                  std::abs(von_neumann_entropy(high_entropy_preset().rho_d) - 0.6693), 1e-3));

  try {
    const RunSetup setup = default_setup("low_entropy");
    const OracleRun run = simulate_with_oracle_history(setup.plant, setup.rcac, setup.sim, opt.oracle_horizon);
    const std::vector<Vector3> oracle = rcac_oracle(setup.rcac, run.history, run.dt);
    double dev = 0.0;
    for (std::size_t k = 0; k < oracle.size(); ++k) {
      dev = std::max(dev, (run.theta[k] - oracle[k]).norm() / (1.0 + oracle[k].norm()));
    }
    out.push_back(detail::max_below("RCAC theta vs -A^{-1} b", dev, 1e-6));
  } catch (const std::exception& err) {
    out.push_back({"RCAC theta vs -A^{-1} b", false, err.what()});
  }

  try {
    RunSetup setup = default_setup("low_entropy");
    setup.sim.t_final = opt.oracle_horizon;
    const auto records = simulate(setup.plant, setup.rcac, setup.sim);
    double tr = 0.0, herm = 0.0, min_eig = 1.0;
    for (const auto& r : records) {
      tr = std::max(tr, r.trace_residual);
      herm = std::max(herm, r.herm_residual);
      min_eig = std::min(min_eig, r.min_eig_rho);
    }
    out.push_back(detail::max_below("closed-loop trace drift", tr, 1e-9));
    out.push_back(detail::max_below("closed-loop Hermiticity residual", herm, 1e-9));
    out.push_back(detail::max_below("closed-loop negative eigenvalue", std::max(0.0, -min_eig), 1e-7));
  } catch (const std::exception& err) {
    out.push_back({"closed-loop conservation", false, err.what()});
  }
  return out;
}

}  // namespace qtrack
