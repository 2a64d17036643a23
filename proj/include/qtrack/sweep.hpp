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
 * @file sweep.hpp
 * @brief Hyperparameter grid over (P0 = s I, beta) scored by
 * J_h = int_{t_lo}^{t_hi} |e(t)| dt.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>
#include <utility>
#include <vector>

#include "qtrack/config.hpp"
#include "qtrack/csv.hpp"
#include "qtrack/errors.hpp"
#include "qtrack/sim.hpp"

namespace qtrack {

/**
 * Trapezoidal integral of |e| over [t_lo, t_hi]. Window ends that fall
 * between samples are linearly interpolated. Records must be time-ordered and
 * cover the window.
 */
inline double jh_cost(const std::vector<TrajectoryRecord>& records, double t_lo, double t_hi) {
  constexpr double kSlack = 1e-9;
  if (!(t_lo < t_hi)) throw NumericalError("jh_cost: empty window");
  if (records.empty() || records.front().t > t_lo + kSlack || records.back().t < t_hi - kSlack) {
    throw NumericalError("jh_cost: trajectory does not cover the cost window");
  }
  double total = 0.0;
  for (std::size_t k = 1; k < records.size(); ++k) {
    const TrajectoryRecord& a = records[k - 1];
    const TrajectoryRecord& b = records[k];
    const double lo = std::max(a.t, t_lo);
    const double hi = std::min(b.t, t_hi);
    if (!(hi > lo)) continue;
    const double span = b.t - a.t;
    auto abs_e_at = [&](double t) {
      const double w = (t - a.t) / span;
      return std::abs((1.0 - w) * a.e + w * b.e);
    };
    total += 0.5 * (hi - lo) * (abs_e_at(lo) + abs_e_at(hi));
  }
  return total;
}

struct SweepResult {
  double p0_scalar = 0.0;
  double beta = 0.0;
  double jh = std::numeric_limits<double>::infinity();
  bool converged = false;
};

/// Runs a single grid cell; divergence becomes jh = +inf, converged = false.
inline SweepResult run_cell(const PlantConfig& plant, const RcacConfig& base, const SimConfig& scfg,
                            const SweepConfig& sweep, double p0_scalar, double beta) {
  SweepResult res{p0_scalar, beta};
  RcacConfig cfg = base;
  cfg.p0 = p0_scalar * Matrix3::Identity();
  cfg.beta = beta;
  try {
    const auto records = simulate(plant, cfg, scfg);
    const double jh = jh_cost(records, sweep.t_lo, sweep.t_hi);
    if (std::isfinite(jh)) {
      res.jh = jh;
      res.converged = true;
    }
  } catch (const NumericalError&) {
    // diverged; keep the +inf sentinel
  }
  return res;
}

/**
 * Evaluates every (p0, beta) cell on up to `workers` threads. Results are in
 * row-major grid order (p0 index outer, beta index inner) whatever the
 * completion order. `on_cell` is called once per finished cell, serialised.
 */
inline std::vector<SweepResult> run_sweep(const PlantConfig& plant, const RcacConfig& base, const SimConfig& scfg,
                                          const SweepConfig& sweep, unsigned workers = 1,
                                          const std::function<void(std::size_t, const SweepResult&)>& on_cell = {}) {
  sweep.validate(scfg.t_final);
  std::vector<std::pair<double, double>> cells;
  for (double p : sweep.p0_scalars) {
    for (double b : sweep.betas) cells.emplace_back(p, b);
  }
  // Configuration errors surface here rather than as silently diverged cells.
  plant.validate(scfg.tol);
  for (const auto& [p, b] : cells) {
    RcacConfig cfg = base;
    cfg.p0 = p * Matrix3::Identity();
    cfg.beta = b;
    cfg.validate();
    scfg.validate(cfg);
  }

  std::vector<SweepResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex report_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      results[i] = run_cell(plant, base, scfg, sweep, cells[i].first, cells[i].second);
      if (on_cell) {
        std::lock_guard lock(report_mutex);
        on_cell(i, results[i]);
      }
    }
  };
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return results;
}

/// Minimum J_h among converged cells; ties go to the smaller p0, then the smaller beta.
inline SweepResult select_best(const std::vector<SweepResult>& results) {
  const SweepResult* best = nullptr;
  for (const auto& r : results) {
    if (!r.converged) continue;
    if (best == nullptr || r.jh < best->jh ||
        (r.jh == best->jh && (r.p0_scalar < best->p0_scalar ||
                              (r.p0_scalar == best->p0_scalar && r.beta < best->beta)))) {
      best = &r;
    }
  }
  if (best == nullptr) throw NumericalError("select_best: every sweep cell diverged");
  return *best;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepResult>& results) {
  out << "p0,beta,jh,converged\n";
  for (const auto& r : results) {
    out << detail::format_real(r.p0_scalar) << ',' << detail::format_real(r.beta) << ','
        << detail::format_real(r.jh) << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

}  // namespace qtrack
