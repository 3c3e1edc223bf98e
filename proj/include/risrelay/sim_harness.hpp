// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo experiment engine: seeded scenarios, one solve per trial,
// validation, and CSV emission.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "risrelay/discrete_phases.hpp"

namespace risrelay {

enum class Mode { HalfDuplex, FullDuplex, RelayOnly, RisOnly };
enum class PhaseSolver { Continuous, Quantized, Refinement };
enum class Placement { UsersCenter, Midpoint };
enum class SweepVariable { RateThreshold, L, K };

std::string to_string(Mode mode);
std::string to_string(PhaseSolver solver);
std::string to_string(Placement placement);
std::string to_string(SweepVariable variable);
std::string to_string(Duplex duplex);

Mode parse_mode(const std::string& text);
RelaySolver parse_relay_solver(const std::string& text);
PhaseSolver parse_phase_solver(const std::string& text);
Placement parse_placement(const std::string& text);
SweepVariable parse_sweep_variable(const std::string& text);
Duplex parse_duplex(const std::string& text);

struct ExperimentConfig {
  Mode mode = Mode::FullDuplex;
  RelaySolver solver = RelaySolver::Duality;
  PhaseSolver phase_solver = PhaseSolver::Continuous;
  int b = 1;
  SweepVariable sweep_variable = SweepVariable::RateThreshold;
  std::vector<double> sweep_values{1.0};
  int M = 5;
  int N = 5;
  int K = 4;
  int L = 50;
  double rth = 1.0;
  int trials = 100;
  std::uint64_t seed = 1;
  Placement placement = Placement::UsersCenter;
  double rician_k = 10.0;
  double noise_dbm = -80.0;
  Duplex relay_duplex = Duplex::Full;  // duplex mode of the relay-only baseline
  int max_outer = 50;
  int threads = 0;  // 0: hardware concurrency
  std::string out = "results.csv";

  void validate() const;

  /// Flat JSON object with the field names above. `rth`, `L` and `K` accept
  /// a number or a list; a list with more than one entry selects the sweep.
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  std::string to_json_text() const;

  /// Apply a list-valued override: several values sweep, one value fixes.
  void set_list(SweepVariable variable, const std::vector<double>& values);

  SolverOptions solver_options() const;
};

SystemGeometry make_geometry(Placement placement, int M, int N, int K, int L);

struct ResultRow {
  std::string mode;
  std::string solver;
  std::string phase_solver;
  double sweep_value = 0.0;
  int trial_index = 0;
  std::uint64_t seed = 0;
  double total_power_mw = 0.0;
  double total_power_dbm = 0.0;
  int outer_iterations = 0;
  bool converged = false;
  double achieved_min_rate = 0.0;
};

/// Header names in column order.
const std::vector<std::string>& result_columns();

struct SummaryRow {
  double sweep_value = 0.0;
  int trials = 0;
  int feasible_trials = 0;
  int converged_trials = 0;
  double mean_power_mw = 0.0;   // mean over feasible trials, linear domain
  double mean_power_dbm = 0.0;  // dBm of mean_power_mw
};

const std::vector<std::string>& summary_columns();

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<SummaryRow> summary;
};

/// Parameters a trial is solved at after applying the sweep value.
struct TrialSetup {
  int M, N, K, L;
  double rth;
  std::uint64_t seed;
};

TrialSetup trial_setup(const ExperimentConfig& config, double sweep_value, int trial_index);

/// Generate the trial's channel set.
ChannelSet trial_channels(const ExperimentConfig& config, const TrialSetup& setup);

/// Solve one trial; stage infeasibility is recorded, not thrown.
ResultRow run_trial(const ExperimentConfig& config, double sweep_value, int trial_index);

/// Rows in (sweep value, trial) order regardless of thread scheduling.
ExperimentResult run_experiment(const ExperimentConfig& config);

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows);

/// Number rendering used in every CSV: 12 significant digits.
std::string format_number(double value);

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);
std::vector<ResultRow> read_results_csv(std::istream& is);

/// `<out>` with a trailing ".csv" replaced by ".summary.csv".
std::string summary_path(const std::string& out);

/// Writes both CSV files; throws std::runtime_error if a file cannot be opened.
void write_experiment(const ExperimentResult& result, const std::string& out);

struct CsvCheck {
  int rows = 0;
  int failures = 0;
  std::vector<std::string> messages;
  bool ok() const { return failures == 0; }
};

/// Format checks (header, dBm consistency, converged rows meeting their QoS
/// when the threshold is known). With a config, every row is re-solved and
/// compared as well.
CsvCheck check_results(const std::vector<ResultRow>& rows,
                       const std::optional<ExperimentConfig>& config);

}  // namespace risrelay
