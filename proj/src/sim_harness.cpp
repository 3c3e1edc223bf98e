// SPDX-License-Identifier: Apache-2.0

#include "risrelay/sim_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace risrelay {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class E>
struct Named {
  const char* name;
  E value;
};

constexpr Named<Mode> kModes[] = {{"hd", Mode::HalfDuplex},
                                  {"fd", Mode::FullDuplex},
                                  {"relay-only", Mode::RelayOnly},
                                  {"ris-only", Mode::RisOnly}};
constexpr Named<RelaySolver> kSolvers[] = {{"duality", RelaySolver::Duality},
                                           {"zf", RelaySolver::ZeroForcing}};
constexpr Named<PhaseSolver> kPhaseSolvers[] = {{"continuous", PhaseSolver::Continuous},
                                                {"quantized", PhaseSolver::Quantized},
                                                {"refinement", PhaseSolver::Refinement}};
constexpr Named<Placement> kPlacements[] = {{"users-center", Placement::UsersCenter},
                                            {"midpoint", Placement::Midpoint}};
constexpr Named<SweepVariable> kSweeps[] = {{"rth", SweepVariable::RateThreshold},
                                            {"L", SweepVariable::L},
                                            {"K", SweepVariable::K}};
constexpr Named<Duplex> kDuplex[] = {{"hd", Duplex::Half}, {"fd", Duplex::Full}};

template <class E, std::size_t n>
E parse_named(const Named<E> (&table)[n], const std::string& text, const char* what) {
  for (const auto& entry : table) {
    if (text == entry.name) return entry.value;
  }
  std::string allowed;
  for (const auto& entry : table) allowed += std::string(allowed.empty() ? "" : ", ") + entry.name;
  throw DomainError(std::string("unknown ") + what + " '" + text + "' (expected one of " +
                    allowed + ")");
}

template <class E, std::size_t n>
std::string name_of(const Named<E> (&table)[n], E value) {
  for (const auto& entry : table) {
    if (entry.value == value) return entry.name;
  }
  return "unknown";
}

bool is_integral(double v) { return std::isfinite(v) && std::floor(v) == v; }

}  // namespace

std::string to_string(Mode mode) { return name_of(kModes, mode); }
std::string to_string(PhaseSolver solver) { return name_of(kPhaseSolvers, solver); }
std::string to_string(Placement placement) { return name_of(kPlacements, placement); }
std::string to_string(SweepVariable variable) { return name_of(kSweeps, variable); }
std::string to_string(Duplex duplex) { return name_of(kDuplex, duplex); }

Mode parse_mode(const std::string& text) { return parse_named(kModes, text, "mode"); }
RelaySolver parse_relay_solver(const std::string& text) {
  return parse_named(kSolvers, text, "solver");
}
PhaseSolver parse_phase_solver(const std::string& text) {
  return parse_named(kPhaseSolvers, text, "phase solver");
}
Placement parse_placement(const std::string& text) {
  return parse_named(kPlacements, text, "placement");
}
SweepVariable parse_sweep_variable(const std::string& text) {
  return parse_named(kSweeps, text, "sweep variable");
}
Duplex parse_duplex(const std::string& text) { return parse_named(kDuplex, text, "duplex"); }

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
  if (trials < 1) throw DomainError("config: trials must be >= 1");
  if (b < 1 || b > 16) throw DomainError("config: b must be in [1, 16]");
  if (sweep_values.empty()) throw DomainError("config: sweep_values must not be empty");
  if (M < 1 || N < 1 || K < 1 || L < 1) throw DomainError("config: M, N, K, L must be >= 1");
  if (!(rth >= 0.0)) throw DomainError("config: rth must be >= 0");
  if (!(rician_k >= 0.0)) throw DomainError("config: rician_k must be >= 0");
  if (!std::isfinite(noise_dbm)) throw DomainError("config: noise_dbm must be finite");
  if (max_outer < 1) throw DomainError("config: max_outer must be >= 1");
  if (threads < 0) throw DomainError("config: threads must be >= 0");
  for (double v : sweep_values) {
    if (sweep_variable == SweepVariable::RateThreshold) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("config: rth values must be >= 0");
    } else if (!is_integral(v) || v < 1.0) {
      throw DomainError("config: L and K sweep values must be positive integers");
    }
  }
}

void ExperimentConfig::set_list(SweepVariable variable, const std::vector<double>& values) {
  if (values.empty()) throw DomainError("config: empty list for " + to_string(variable));
  if (values.size() > 1) {
    sweep_variable = variable;
    sweep_values = values;
    return;
  }
  const double v = values.front();
  switch (variable) {
    case SweepVariable::RateThreshold: rth = v; break;
    case SweepVariable::L:
      if (!is_integral(v)) throw DomainError("config: L must be an integer");
      L = static_cast<int>(v);
      break;
    case SweepVariable::K:
      if (!is_integral(v)) throw DomainError("config: K must be an integer");
      K = static_cast<int>(v);
      break;
  }
  if (sweep_variable == variable) sweep_values = values;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw DomainError("config: top level must be an object");

  ExperimentConfig c;
  std::vector<std::pair<SweepVariable, std::vector<double>>> lists;
  bool explicit_sweep = false;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "mode") c.mode = parse_mode(value.get<std::string>());
      else if (key == "solver") c.solver = parse_relay_solver(value.get<std::string>());
      else if (key == "phase_solver") c.phase_solver = parse_phase_solver(value.get<std::string>());
      else if (key == "b") c.b = value.get<int>();
      else if (key == "sweep_variable") {
        c.sweep_variable = parse_sweep_variable(value.get<std::string>());
        explicit_sweep = true;
      } else if (key == "sweep_values") c.sweep_values = value.get<std::vector<double>>();
      else if (key == "M") c.M = value.get<int>();
      else if (key == "N") c.N = value.get<int>();
      else if (key == "rth" || key == "L" || key == "K") {
        const SweepVariable var = parse_sweep_variable(key);
        lists.emplace_back(var, value.is_array() ? value.get<std::vector<double>>()
                                                 : std::vector<double>{value.get<double>()});
      } else if (key == "trials") c.trials = value.get<int>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "placement") c.placement = parse_placement(value.get<std::string>());
      else if (key == "rician_k") c.rician_k = value.get<double>();
      else if (key == "noise_dbm") c.noise_dbm = value.get<double>();
      else if (key == "relay_duplex") c.relay_duplex = parse_duplex(value.get<std::string>());
      else if (key == "max_outer") c.max_outer = value.get<int>();
      else if (key == "threads") c.threads = value.get<int>();
      else if (key == "out") c.out = value.get<std::string>();
      else throw DomainError("config: unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: wrong value type: ") + e.what());
  }

  // With an explicit sweep variable, single values of the other parameters
  // still apply as fixed values.
  if (explicit_sweep) {
    for (const auto& [var, values] : lists) {
      if (var == c.sweep_variable) continue;
      if (values.size() != 1) throw DomainError("config: more than one sweep variable");
      c.set_list(var, values);
    }
    for (const auto& [var, values] : lists) {
      if (var == c.sweep_variable && !j.contains("sweep_values")) c.sweep_values = values;
    }
  } else {
    int multi = 0;
    for (const auto& [var, values] : lists) multi += values.size() > 1 ? 1 : 0;
    if (multi > 1) throw DomainError("config: more than one sweep variable");
    for (const auto& [var, values] : lists) c.set_list(var, values);
    if (multi == 0 && !j.contains("sweep_values")) {
      c.sweep_variable = SweepVariable::RateThreshold;
      c.sweep_values = {c.rth};
    }
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

std::string ExperimentConfig::to_json_text() const {
  json j;
  j["mode"] = to_string(mode);
  j["solver"] = to_string(solver);
  j["phase_solver"] = to_string(phase_solver);
  j["b"] = b;
  j["sweep_variable"] = to_string(sweep_variable);
  j["sweep_values"] = sweep_values;
  j["M"] = M;
  j["N"] = N;
  j["K"] = K;
  j["L"] = L;
  j["rth"] = rth;
  j["trials"] = trials;
  j["seed"] = seed;
  j["placement"] = to_string(placement);
  j["rician_k"] = rician_k;
  j["noise_dbm"] = noise_dbm;
  j["relay_duplex"] = to_string(relay_duplex);
  j["max_outer"] = max_outer;
  j["threads"] = threads;
  j["out"] = out;
  return j.dump(2);
}

SolverOptions ExperimentConfig::solver_options() const {
  SolverOptions o;
  o.relay_solver = solver;
  o.max_outer = max_outer;
  return o;
}

SystemGeometry make_geometry(Placement placement, int M, int N, int K, int L) {
  SystemGeometry g = SystemGeometry::make(M, N, K, L);
  if (placement == Placement::Midpoint) {
    g.relay_position = Vec3(150.0, 0.0, 10.0);
    g.ris_position = Vec3(150.0, 10.0, 10.0);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Trials

TrialSetup trial_setup(const ExperimentConfig& config, double sweep_value, int trial_index) {
  TrialSetup s{config.M, config.N, config.K, config.L, config.rth,
               config.seed + static_cast<std::uint64_t>(trial_index)};
  switch (config.sweep_variable) {
    case SweepVariable::RateThreshold: s.rth = sweep_value; break;
    case SweepVariable::L: s.L = static_cast<int>(sweep_value); break;
    case SweepVariable::K: s.K = static_cast<int>(sweep_value); break;
  }
  return s;
}

ChannelSet trial_channels(const ExperimentConfig& config, const TrialSetup& setup) {
  const SystemGeometry g = make_geometry(config.placement, setup.M, setup.N, setup.K, setup.L);
  FadingParams params;
  params.rician_k = config.rician_k;
  params.noise_power = dbm_to_mw(config.noise_dbm);
  return generate_scenario(g, params, setup.seed);
}

namespace {

struct TrialOutcome {
  double power = kInf;
  int outer_iterations = 0;
  bool solver_converged = false;
  bool valid = false;
  double min_rate = 0.0;
};

template <class Sol>
TrialOutcome from_solution(const ChannelSet& ch, Scheme scheme, const Sol& sol,
                           const PhaseVector& theta1, const PhaseVector& theta2, double rth) {
  TrialOutcome out;
  out.power = sol.total_power;
  out.outer_iterations = sol.outer_iterations;
  out.solver_converged = sol.converged;
  CMatrix U = CMatrix::Zero(ch.N(), ch.K());
  if constexpr (requires { sol.U; }) U = sol.U;
  out.valid = validate_scheme(ch, scheme, theta1, theta2, sol.W, U, rth).ok();
  out.min_rate = min_user_rate(scheme, scheme_rates(ch, scheme, theta1, theta2, sol.W, U));
  return out;
}

struct ContinuousResult {
  TrialOutcome outcome;
  PhaseVector theta1;
  PhaseVector theta2;
};

ContinuousResult solve_continuous(const ChannelSet& ch, Scheme scheme, double rth,
                                  const SolverOptions& options) {
  ContinuousResult r;
  switch (scheme) {
    case Scheme::HalfDuplex: {
      const HalfDuplexSolution s = solve_half_duplex(ch, rth, options);
      r.theta1 = s.theta1;
      r.theta2 = s.theta2;
      r.outcome = from_solution(ch, scheme, s, s.theta1, s.theta2, rth);
      break;
    }
    case Scheme::FullDuplex: {
      const FullDuplexSolution s = solve_full_duplex(ch, rth, options);
      r.theta1 = r.theta2 = s.theta;
      r.outcome = from_solution(ch, scheme, s, s.theta, s.theta, rth);
      break;
    }
    case Scheme::RisOnly: {
      const RisOnlySolution s = solve_ris_only(ch, rth, options);
      r.theta1 = r.theta2 = s.theta;
      r.outcome = from_solution(ch, scheme, s, s.theta, s.theta, rth);
      break;
    }
  }
  return r;
}

TrialOutcome solve_trial(const ExperimentConfig& config, const ChannelSet& ch_full, double rth) {
  const SolverOptions options = config.solver_options();
  Scheme scheme = Scheme::FullDuplex;
  ChannelSet ch = ch_full;
  switch (config.mode) {
    case Mode::HalfDuplex: scheme = Scheme::HalfDuplex; break;
    case Mode::FullDuplex: scheme = Scheme::FullDuplex; break;
    case Mode::RisOnly: scheme = Scheme::RisOnly; break;
    case Mode::RelayOnly:
      scheme = config.relay_duplex == Duplex::Half ? Scheme::HalfDuplex : Scheme::FullDuplex;
      ch = ch_full.without_ris();
      // Phases have no effect without reflected paths.
      return solve_continuous(ch, scheme, rth, options).outcome;
  }

  ContinuousResult cont = solve_continuous(ch, scheme, rth, options);
  if (config.phase_solver == PhaseSolver::Continuous) return cont.outcome;

  const std::vector<int> q1 = quantize_levels(extract_phases(cont.theta1), config.b);
  const std::vector<int> q2 = scheme == Scheme::HalfDuplex
                                  ? quantize_levels(extract_phases(cont.theta2), config.b)
                                  : std::vector<int>{};
  const DiscreteSolution d =
      config.phase_solver == PhaseSolver::Quantized
          ? evaluate_discrete(ch, scheme, config.b, q1, q2, rth, options)
          : successive_refinement(ch, scheme, rth, config.b, q1, q2, options);

  TrialOutcome out;
  out.power = d.total_power;
  out.outer_iterations = config.phase_solver == PhaseSolver::Quantized ? cont.outcome.outer_iterations
                                                                       : d.sweeps;
  out.solver_converged = cont.outcome.solver_converged && d.converged;
  if (std::isfinite(d.total_power)) {
    const CMatrix U = scheme == Scheme::RisOnly ? CMatrix::Zero(ch.N(), ch.K()) : d.U;
    out.valid = validate_scheme(ch, scheme, d.theta1, d.theta2, d.W, U, rth).ok();
    out.min_rate =
        min_user_rate(scheme, scheme_rates(ch, scheme, d.theta1, d.theta2, d.W, U));
  }
  return out;
}

}  // namespace

ResultRow run_trial(const ExperimentConfig& config, double sweep_value, int trial_index) {
  const TrialSetup setup = trial_setup(config, sweep_value, trial_index);
  ResultRow row;
  row.mode = to_string(config.mode);
  row.solver = to_string(config.solver);
  row.phase_solver = to_string(config.phase_solver);
  row.sweep_value = sweep_value;
  row.trial_index = trial_index;
  row.seed = setup.seed;

  TrialOutcome outcome;
  try {
    outcome = solve_trial(config, trial_channels(config, setup), setup.rth);
  } catch (const InfeasibleError&) {
  } catch (const ConvergenceError&) {
  } catch (const SingularError&) {
  }
  row.total_power_mw = outcome.power;
  row.total_power_dbm = std::isfinite(outcome.power) ? mw_to_dbm(outcome.power) : kInf;
  row.outer_iterations = outcome.outer_iterations;
  row.converged =
      std::isfinite(outcome.power) && outcome.solver_converged && outcome.valid;
  row.achieved_min_rate = outcome.min_rate;
  return row;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto values = config.sweep_values;
  const std::size_t total = values.size() * static_cast<std::size_t>(config.trials);
  std::vector<ResultRow> rows(total);

  unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next++; i < total && !failed; i = next++) {
      try {
        const std::size_t v = i / static_cast<std::size_t>(config.trials);
        const int t = static_cast<int>(i % static_cast<std::size_t>(config.trials));
        rows[i] = run_trial(config, values[v], t);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  result.rows = std::move(rows);
  result.summary = summarize(result.rows);
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows) {
  std::vector<SummaryRow> out;
  for (const ResultRow& r : rows) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const SummaryRow& s) { return s.sweep_value == r.sweep_value; });
    if (it == out.end()) {
      out.push_back(SummaryRow{r.sweep_value});
      it = out.end() - 1;
    }
    ++it->trials;
    if (r.converged) ++it->converged_trials;
    if (std::isfinite(r.total_power_mw)) {
      ++it->feasible_trials;
      it->mean_power_mw += r.total_power_mw;
    }
  }
  for (SummaryRow& s : out) {
    if (s.feasible_trials > 0) {
      s.mean_power_mw /= s.feasible_trials;
      s.mean_power_dbm = mw_to_dbm(s.mean_power_mw);
    } else {
      s.mean_power_mw = kInf;
      s.mean_power_dbm = kInf;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols{
      "mode",           "solver",          "phase_solver",     "sweep_value",
      "trial_index",    "seed",            "total_power_mw",   "total_power_dbm",
      "outer_iterations", "converged",     "achieved_min_rate"};
  return cols;
}

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols{
      "sweep_value", "trials", "feasible_trials", "converged_trials",
      "mean_power_mw_linear_average", "mean_power_dbm_of_linear_average"};
  return cols;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

namespace {

void write_header(std::ostream& os, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

}  // namespace

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  write_header(os, result_columns());
  for (const ResultRow& r : rows) {
    os << r.mode << ',' << r.solver << ',' << r.phase_solver << ',' << format_number(r.sweep_value)
       << ',' << r.trial_index << ',' << r.seed << ',' << format_number(r.total_power_mw) << ','
       << format_number(r.total_power_dbm) << ',' << r.outer_iterations << ','
       << (r.converged ? "true" : "false") << ',' << format_number(r.achieved_min_rate) << '\n';
  }
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  write_header(os, summary_columns());
  for (const SummaryRow& s : rows) {
    os << format_number(s.sweep_value) << ',' << s.trials << ',' << s.feasible_trials << ','
       << s.converged_trials << ',' << format_number(s.mean_power_mw) << ','
       << format_number(s.mean_power_dbm) << '\n';
  }
}

std::vector<ResultRow> read_results_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DomainError("results csv: empty input");
  if (split_csv_line(line) != result_columns()) {
    throw DomainError("results csv: header does not match the result columns");
  }
  std::vector<ResultRow> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != result_columns().size()) {
      throw DomainError("results csv: line " + std::to_string(lineno) + " has " +
                        std::to_string(cells.size()) + " fields");
    }
    try {
      ResultRow r;
      r.mode = cells[0];
      r.solver = cells[1];
      r.phase_solver = cells[2];
      r.sweep_value = parse_double(cells[3]);
      r.trial_index = std::stoi(cells[4]);
      r.seed = std::stoull(cells[5]);
      r.total_power_mw = parse_double(cells[6]);
      r.total_power_dbm = parse_double(cells[7]);
      r.outer_iterations = std::stoi(cells[8]);
      if (cells[9] != "true" && cells[9] != "false") throw std::invalid_argument("converged");
      r.converged = cells[9] == "true";
      r.achieved_min_rate = parse_double(cells[10]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw DomainError("results csv: malformed value on line " + std::to_string(lineno));
    }
  }
  return rows;
}

std::string summary_path(const std::string& out) {
  const std::string ext = ".csv";
  if (out.size() >= ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0) {
    return out.substr(0, out.size() - ext.size()) + ".summary.csv";
  }
  return out + ".summary.csv";
}

void write_experiment(const ExperimentResult& result, const std::string& out) {
  std::ofstream rows(out, std::ios::binary);
  if (!rows) throw std::runtime_error("cannot write '" + out + "'");
  write_results_csv(rows, result.rows);
  const std::string sp = summary_path(out);
  std::ofstream summary(sp, std::ios::binary);
  if (!summary) throw std::runtime_error("cannot write '" + sp + "'");
  write_summary_csv(summary, result.summary);
}

CsvCheck check_results(const std::vector<ResultRow>& rows,
                       const std::optional<ExperimentConfig>& config) {
  CsvCheck check;
  auto fail = [&](int i, const std::string& msg) {
    ++check.failures;
    check.messages.push_back("row " + std::to_string(i) + ": " + msg);
  };
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const ResultRow& r = rows[n];
    const int i = static_cast<int>(n);
    ++check.rows;
    try {
      parse_mode(r.mode);
      parse_relay_solver(r.solver);
      parse_phase_solver(r.phase_solver);
    } catch (const DomainError& e) {
      fail(i, e.what());
    }
    if (std::isfinite(r.total_power_mw)) {
      const double expected = mw_to_dbm(r.total_power_mw);
      if (!(std::abs(expected - r.total_power_dbm) <= 1e-9 * std::max(1.0, std::abs(expected)))) {
        fail(i, "total_power_dbm inconsistent with total_power_mw");
      }
    } else if (r.converged) {
      fail(i, "converged row with non-finite power");
    }
    if (!config) continue;

    const TrialSetup setup = trial_setup(*config, r.sweep_value, r.trial_index);
    if (r.seed != setup.seed) fail(i, "seed does not match the configuration");
    if (r.converged && !(r.achieved_min_rate >= setup.rth - 1e-6)) {
      fail(i, "converged row below its rate threshold");
    }
    const ResultRow again = run_trial(*config, r.sweep_value, r.trial_index);
    const bool same_power =
        again.total_power_mw == r.total_power_mw ||
        std::abs(again.total_power_mw - r.total_power_mw) <= 1e-9 * std::abs(r.total_power_mw);
    if (!same_power || again.converged != r.converged) {
      fail(i, "re-solve does not reproduce the row");
    }
  }
  return check;
}

}  // namespace risrelay
