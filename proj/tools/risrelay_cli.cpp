// SPDX-License-Identifier: Apache-2.0
//
// risrelay simulate | validate | oracle

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "risrelay/sim_harness.hpp"

using namespace risrelay;

namespace {

struct SimulateArgs {
  std::string config;
  std::string mode, solver, phase_solver, placement, out;
  std::optional<int> b, trials;
  std::optional<std::uint64_t> seed;
  std::vector<double> rth, L, K;
};

int simulate(const SimulateArgs& a) {
  ExperimentConfig cfg = a.config.empty() ? ExperimentConfig{} : ExperimentConfig::load(a.config);
  if (!a.mode.empty()) cfg.mode = parse_mode(a.mode);
  if (!a.solver.empty()) cfg.solver = parse_relay_solver(a.solver);
  if (!a.phase_solver.empty()) cfg.phase_solver = parse_phase_solver(a.phase_solver);
  if (!a.placement.empty()) cfg.placement = parse_placement(a.placement);
  if (!a.out.empty()) cfg.out = a.out;
  if (a.b) cfg.b = *a.b;
  if (a.trials) cfg.trials = *a.trials;
  if (a.seed) cfg.seed = *a.seed;

  int lists = 0;
  for (const auto* v : {&a.rth, &a.L, &a.K}) lists += v->size() > 1 ? 1 : 0;
  if (lists > 1) throw DomainError("only one of --rth, --L, --K may list several values");
  if (!a.rth.empty()) cfg.set_list(SweepVariable::RateThreshold, a.rth);
  if (!a.L.empty()) cfg.set_list(SweepVariable::L, a.L);
  if (!a.K.empty()) cfg.set_list(SweepVariable::K, a.K);
  cfg.validate();

  const ExperimentResult result = run_experiment(cfg);
  write_experiment(result, cfg.out);

  int converged = 0;
  for (const auto& r : result.rows) converged += r.converged ? 1 : 0;
  std::cerr << "wrote " << result.rows.size() << " rows (" << converged << " converged) to "
            << cfg.out << " and " << summary_path(cfg.out) << '\n';
  for (const auto& s : result.summary) {
    std::cerr << "  " << to_string(cfg.sweep_variable) << " = " << format_number(s.sweep_value)
              << ": " << format_number(s.mean_power_dbm) << " dBm\n";
  }
  return 0;
}

int validate(const std::string& in, const std::string& config) {
  std::ifstream is(in);
  if (!is) throw std::runtime_error("cannot open '" + in + "'");
  const std::vector<ResultRow> rows = read_results_csv(is);
  std::optional<ExperimentConfig> cfg;
  if (!config.empty()) cfg = ExperimentConfig::load(config);
  const CsvCheck check = check_results(rows, cfg);
  for (const auto& m : check.messages) std::cout << m << '\n';
  std::cout << (check.ok() ? "OK" : "FAILED") << ": " << check.rows << " rows, " << check.failures
            << " failures" << (cfg ? " (re-solved)" : "") << '\n';
  return check.ok() ? 0 : 1;
}

struct OracleArgs {
  std::string mode = "fd";
  std::string solver = "duality";
  int M = 5, N = 5, K = 4, L = 4, b = 1;
  double rth = 1.0;
  std::uint64_t seed = 1;
  std::string placement = "users-center";
};

int oracle(const OracleArgs& a) {
  const Mode mode = parse_mode(a.mode);
  Scheme scheme = Scheme::FullDuplex;
  if (mode == Mode::HalfDuplex) scheme = Scheme::HalfDuplex;
  else if (mode == Mode::RisOnly) scheme = Scheme::RisOnly;
  else if (mode != Mode::FullDuplex) throw DomainError("oracle: mode must be hd, fd or ris-only");

  ExperimentConfig cfg;
  cfg.M = a.M;
  cfg.N = a.N;
  cfg.K = a.K;
  cfg.L = a.L;
  cfg.solver = parse_relay_solver(a.solver);
  cfg.placement = parse_placement(a.placement);
  const TrialSetup setup{a.M, a.N, a.K, a.L, a.rth, a.seed};
  const ChannelSet ch = trial_channels(cfg, setup);
  const DiscreteSolution d = brute_force_oracle(ch, scheme, a.rth, a.b, cfg.solver_options());

  nlohmann::json j;
  j["mode"] = a.mode;
  j["solver"] = a.solver;
  j["b"] = a.b;
  j["L"] = a.L;
  j["rth"] = a.rth;
  j["seed"] = a.seed;
  j["configurations"] = d.evaluations;
  j["total_power_mw"] = d.total_power;
  j["total_power_dbm"] = std::isfinite(d.total_power) ? mw_to_dbm(d.total_power) : 0.0;
  j["feasible"] = std::isfinite(d.total_power);
  j["levels1"] = d.levels1;
  j["levels2"] = d.levels2;
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS and relay assisted multiuser MISO power minimisation"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run a Monte Carlo sweep and write CSV output");
  s->add_option("--config", sim.config, "Flat JSON experiment config");
  s->add_option("--mode", sim.mode, "hd | fd | relay-only | ris-only");
  s->add_option("--solver", sim.solver, "duality | zf");
  s->add_option("--phase-solver", sim.phase_solver, "continuous | quantized | refinement");
  s->add_option("--b", sim.b, "Phase resolution in bits");
  s->add_option("--rth", sim.rth, "Rate threshold(s), bits per symbol")->delimiter(',');
  s->add_option("--L", sim.L, "RIS element count(s)")->delimiter(',');
  s->add_option("--K", sim.K, "User count(s)")->delimiter(',');
  s->add_option("--trials", sim.trials, "Trials per sweep value");
  s->add_option("--seed", sim.seed, "Base seed; trial t uses seed + t");
  s->add_option("--placement", sim.placement, "users-center | midpoint");
  s->add_option("--out", sim.out, "Result CSV path");

  std::string in, vconfig;
  auto* v = app.add_subcommand("validate", "Check a result CSV");
  v->add_option("--in", in, "Result CSV")->required();
  v->add_option("--config", vconfig, "Config used to produce it; enables re-solving every row");

  OracleArgs orc;
  auto* o = app.add_subcommand("oracle", "Exhaustive discrete-phase search on one scenario");
  o->add_option("--mode", orc.mode, "hd | fd | ris-only")->capture_default_str();
  o->add_option("--solver", orc.solver, "duality | zf")->capture_default_str();
  o->add_option("--M", orc.M)->capture_default_str();
  o->add_option("--N", orc.N)->capture_default_str();
  o->add_option("--K", orc.K)->capture_default_str();
  o->add_option("--L", orc.L)->capture_default_str();
  o->add_option("--b", orc.b)->capture_default_str();
  o->add_option("--rth", orc.rth)->capture_default_str();
  o->add_option("--seed", orc.seed)->capture_default_str();
  o->add_option("--placement", orc.placement)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (s->parsed()) return simulate(sim);
    if (v->parsed()) return validate(in, vconfig);
    if (o->parsed()) return oracle(orc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
