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

// qtrack command-line driver.
//
//   qtrack simulate    --scenario <low_entropy|high_entropy> [--config f] [--out f.csv] [--open-loop-u u]
//   qtrack sweep       --scenario <name> [--config f] --out f.csv [--workers n]
//   qtrack equilibrium --scenario <name>
//   qtrack verify      [--fast]
//
// Exit codes: 0 success, 1 divergence or failed verification, 2 usage/config error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "qtrack/qtrack.hpp"
#include "qtrack/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

qtrack::RunSetup load_setup(const std::string& scenario, const std::string& config_path) {
  qtrack::RunSetup setup = qtrack::default_setup(scenario);
  if (!config_path.empty()) qtrack::apply_config_file(config_path, setup);
  return setup;
}

int cmd_simulate(const std::string& scenario, const std::string& config, const std::string& out_path,
                 std::optional<double> open_loop_u) {
  qtrack::RunSetup setup = load_setup(scenario, config);
  if (open_loop_u) setup.sim.open_loop_u = *open_loop_u;
  std::vector<qtrack::TrajectoryRecord> records;
  int code = kExitOk;
  try {
    records = qtrack::simulate(setup.plant, setup.rcac, setup.sim);
  } catch (const qtrack::SimulationDiverged& err) {
    std::cerr << "simulate: " << err.what() << " (last valid t = " << err.last_valid().t << ")\n";
    records = {err.last_valid()};
    code = kExitFailure;
  }
  if (out_path.empty()) {
    qtrack::write_trajectory_csv(std::cout, records);
  } else {
    std::ofstream out(out_path);
    if (!out) throw qtrack::ConfigError("cannot write '" + out_path + "'");
    qtrack::write_trajectory_csv(out, records);
    const auto& last = records.back();
    std::cerr << "wrote " << records.size() << " records to " << out_path << "; e(" << last.t << ") = " << last.e
              << ", entropy = " << last.entropy << '\n';
  }
  return code;
}

int cmd_sweep(const std::string& scenario, const std::string& config, const std::string& out_path, unsigned workers) {
  const qtrack::RunSetup setup = load_setup(scenario, config);
  const std::size_t betas = setup.sweep.betas.size();
  const auto results = qtrack::run_sweep(setup.plant, setup.rcac, setup.sim, setup.sweep, workers,
                                         [&](std::size_t i, const qtrack::SweepResult& r) {
                                           std::cerr << "cell (" << i / betas << ", " << i % betas << ") p0 = "
                                                     << r.p0_scalar << " beta = " << r.beta << " J_h = " << r.jh
                                                     << (r.converged ? "" : " [diverged]") << '\n';
                                         });
  std::ofstream out(out_path);
  if (!out) throw qtrack::ConfigError("cannot write '" + out_path + "'");
  qtrack::write_sweep_csv(out, results);
  try {
    const auto best = qtrack::select_best(results);
    std::cout << "best p0 = " << best.p0_scalar << " beta = " << best.beta << " J_h = " << best.jh << '\n';
  } catch (const qtrack::NumericalError& err) {
    std::cerr << err.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_equilibrium(const std::string& scenario) {
  const qtrack::ScenarioPreset preset = qtrack::scenario_by_name(scenario);
  const double res = qtrack::equilibrium_residual(qtrack::default_plant(), preset.rho_d, preset.equilibrium_u);
  std::cout << preset.name << ": ||L(rho_d, u = " << preset.equilibrium_u << ")||_F = " << res << '\n';
  return res <= 1e-3 ? kExitOk : kExitFailure;
}

int cmd_verify(bool fast) {
  qtrack::VerifyOptions opt;
  if (fast) opt.oracle_horizon = 2.0;
  bool all = true;
  for (const auto& check : qtrack::run_verification(opt)) {
    std::cout << (check.passed ? "[PASS] " : "[FAIL] ") << check.name << ": " << check.detail << '\n';
    all = all && check.passed;
  }
  return all ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive density tracking for a two-level open quantum system"};
  app.require_subcommand(1);

  std::string scenario = "low_entropy";
  std::string config;
  std::string out_path;
  std::optional<double> open_loop_u;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  bool fast = false;

  auto* sim = app.add_subcommand("simulate", "Run one closed-loop simulation and emit a trajectory CSV");
  sim->add_option("--scenario", scenario, "low_entropy or high_entropy");
  sim->add_option("--config", config, "key = value configuration file")->check(CLI::ExistingFile);
  sim->add_option("--out", out_path, "output CSV (stdout if omitted)");
  sim->add_option("--open-loop-u", open_loop_u, "hold u at a constant instead of the adaptive law");

  auto* sweep = app.add_subcommand("sweep", "Grid search over (P0, beta) scored by J_h");
  sweep->add_option("--scenario", scenario, "low_entropy or high_entropy");
  sweep->add_option("--config", config, "key = value configuration file")->check(CLI::ExistingFile);
  sweep->add_option("--out", out_path, "output CSV")->required();
  sweep->add_option("--workers", workers, "parallel simulations")->check(CLI::PositiveNumber);

  auto* eq = app.add_subcommand("equilibrium", "Residual of the target under its holding input");
  eq->add_option("--scenario", scenario, "low_entropy or high_entropy")->required();

  auto* verify = app.add_subcommand("verify", "Run the invariant suites and the RCAC oracle");
  verify->add_flag("--fast", fast, "truncate the oracle horizon to 2 s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*sim) return cmd_simulate(scenario, config, out_path, open_loop_u);
    if (*sweep) return cmd_sweep(scenario, config, out_path, workers);
    if (*eq) return cmd_equilibrium(scenario);
    if (*verify) return cmd_verify(fast);
  } catch (const qtrack::ConfigError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const qtrack::NumericalError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
