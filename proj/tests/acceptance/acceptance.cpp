// Acceptance run: one PASS/FAIL line per criterion.
//
// Exit status is 0 when every criterion passes, except those listed with
// --expect-fail, which must fail (a listed criterion that passes is an error
// too, so the list cannot go stale).

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unistd.h>
#include <string>

#include "oracles.hpp"
#include "risrelay/baselines.hpp"
#include "risrelay/sim_harness.hpp"

using namespace risrelay;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool monotone(const std::vector<double>& h) {
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i] > h[i - 1] * (1.0 + 1e-9)) return false;
  return true;
}

ChannelSet default_scenario(std::uint64_t seed) {
  return generate_scenario(SystemGeometry::make(5, 5, 4, 50), FadingParams{}, seed);
}

Outcome waterfilling_tightness() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> rate(0.5, 40.0);
  const double noise = 1e-2;
  double worst = 0.0;
  bool nonneg = true;
  for (int i = 0; i < 1000; ++i) {
    const CMatrix H = oracle::random_matrix(rng, 5, 5);
    const double target = rate(rng);
    const WaterFilling wf = svd_waterfilling(H, noise, target, 4);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(H * H.adjoint());
    std::vector<double> lam(es.eigenvalues().data(), es.eigenvalues().data() + 5);
    std::sort(lam.rbegin(), lam.rend());
    double achieved = 0.0;
    for (std::size_t k = 0; k < wf.powers.size(); ++k) {
      nonneg = nonneg && wf.powers[k] >= 0.0;
      achieved += std::log2(1.0 + wf.powers[k] * lam[k] / noise);
    }
    worst = std::max(worst, std::abs(achieved - target));
    // The precoder itself must deliver the same rate.
    worst = std::max(worst, std::abs(oracle::relay_rate_eigen(H, wf.W, noise) - target));
  }
  return {worst <= 1e-9 && nonneg, fmt("max |rate - target| = %.2e bits", worst)};
}

Outcome duality_tightness() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> tgt(0.1, 30.0), nz(0.1, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const CMatrix rows = oracle::random_matrix(rng, 5, 4);
    std::vector<double> noise(4), targets(4);
    for (int k = 0; k < 4; ++k) {
      noise[k] = nz(rng);
      targets[k] = tgt(rng);
    }
    const DualityResult d = duality_beamforming(rows, noise, targets);
    for (int k = 0; k < 4; ++k) {
      const double s = oracle::sinr(rows.col(k), d.U, noise[k], k);
      worst = std::max(worst, std::abs(s - targets[k]) / targets[k]);
    }
  }
  return {worst <= 1e-6, fmt("max relative SINR error = %.2e", worst)};
}

Outcome zf_dominance() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> tgt(0.1, 30.0);
  double worst_leak = 0.0;
  int dominated = 0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const CMatrix rows = oracle::random_matrix(rng, 5, 4);
    const std::vector<double> noise(4, 1.0);
    std::vector<double> targets(4);
    for (double& t : targets) t = tgt(rng);
    const CMatrix Z = zero_forcing(rows, targets, noise);
    for (int col = 0; col < 4; ++col)
      for (int k = 0; k < 4; ++k)
        if (k != col) {
          worst_leak = std::max(worst_leak, std::abs(oracle::inner(rows.col(k), Z.col(col))) /
                                                Z.col(col).norm());
        }
    const CMatrix D = duality_beamforming(rows, noise, targets).U;
    if (Z.squaredNorm() >= D.squaredNorm() * (1.0 - 1e-9)) ++dominated;
  }
  return {worst_leak <= 1e-9 && dominated == n,
          fmt("max leak/||u|| = %.2e, zf >= duality on %d/%d", worst_leak, dominated, n)};
}

Outcome surrogate_tangency() {
  std::mt19937_64 rng(404);
  double worst_gap = 0.0;
  double worst_bound = 0.0;
  for (int i = 0; i < 200; ++i) {
    const ChannelSet ch = default_scenario(10000 + i);
    const PhaseVector e{oracle::random_phases(rng, ch.L())};
    const CMatrix H = oracle::cascaded_bs_relay(ch, e.v);
    const CMatrix W = svd_waterfilling(H, ch.noise_power, 16.0, 4).W;
    const SurrogateData s = surrogate_relay_rate(ch, e, W);
    worst_gap = std::max(worst_gap,
                         std::abs(s.evaluate(e.v) - oracle::relay_rate_eigen(H, W, ch.noise_power)));
    for (int p = 0; p < 100; ++p) {
      const CVector v = oracle::random_phases(rng, ch.L());
      const double r = oracle::relay_rate_eigen(oracle::cascaded_bs_relay(ch, v), W, ch.noise_power);
      worst_bound = std::max(worst_bound, r - s.evaluate(v));
    }
  }
  return {worst_gap <= 1e-6 && worst_bound <= 1e-9,
          fmt("max tangency gap = %.2e, max rate - surrogate = %.2e", worst_gap, worst_bound)};
}

Outcome monotone_descent(double seconds_budget) {
  const auto t0 = std::chrono::steady_clock::now();
  int mono = 0, hd_fast = 0, fd_fast = 0;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    const ChannelSet ch = default_scenario(20000 + i);
    const double rth = 1.0 + i % 6;
    const HalfDuplexSolution h = solve_half_duplex(ch, rth);
    const FullDuplexSolution f = solve_full_duplex(ch, rth);
    if (monotone(h.power_history) && monotone(f.power_history)) ++mono;
    if (h.converged && h.outer_iterations <= 10) ++hd_fast;
    if (f.converged && f.outer_iterations <= 10) ++fd_fast;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = mono == n && hd_fast >= 0.9 * n && fd_fast >= 0.9 * n && secs < seconds_budget;
  return {ok, fmt("monotone %d/%d, within 10 iterations hd %d/%d fd %d/%d, %.1f s", mono, n,
                  hd_fast, n, fd_fast, n, secs)};
}

Outcome discrete_oracle_bound() {
  int ordered = 0, tight = 0;
  const int n = 50;
  for (int i = 0; i < n; ++i) {
    const ChannelSet ch =
        generate_scenario(SystemGeometry::make(5, 5, 4, 4), FadingParams{}, 30000 + i);
    const double rth = 2.0;
    const FullDuplexSolution cont = solve_full_duplex(ch, rth);
    const std::vector<double> ang = extract_phases(cont.theta);
    const std::vector<int> q = quantize_levels(ang, 1);
    const double quantized = evaluate_discrete(ch, Scheme::FullDuplex, 1, q, {}, rth).total_power;
    const double refined = successive_refinement(ch, Scheme::FullDuplex, rth, 1, q, {}).total_power;
    const double best = brute_force_oracle(ch, Scheme::FullDuplex, rth, 1).total_power;
    if (best <= refined && refined <= quantized) ++ordered;
    if (best == refined) ++tight;
  }
  return {ordered == n && 2 * tight >= n,
          fmt("ordered %d/%d, oracle == refinement on %d/%d", ordered, n, tight, n)};
}

/// Per-trial powers of one mode, keyed by sweep value.
std::map<double, std::vector<double>> powers_by_sweep(const ExperimentResult& r) {
  std::map<double, std::vector<double>> out;
  for (const ResultRow& row : r.rows) out[row.sweep_value].push_back(row.total_power_mw);
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

ExperimentConfig trend_config(Mode mode, SweepVariable var, std::vector<double> values,
                              Placement placement, double rth) {
  ExperimentConfig c;
  c.mode = mode;
  c.trials = 100;
  c.seed = 4242;
  c.placement = placement;
  c.rth = rth;
  c.set_list(var, values);
  return c;
}

Outcome rate_threshold_ordering() {
  auto run = [](Mode m) {
    return powers_by_sweep(
        run_experiment(trend_config(m, SweepVariable::RateThreshold, {1.0, 6.0},
                                    Placement::UsersCenter, 1.0)));
  };
  auto hd = run(Mode::HalfDuplex);
  auto fd = run(Mode::FullDuplex);
  auto ris = run(Mode::RisOnly);

  bool ok = true;
  std::string detail;
  for (double r : {1.0, 6.0}) {
    const double h = mean(hd[r]), f = mean(fd[r]), s = mean(ris[r]);
    ok = ok && f < s && f < h;
    detail += fmt("R=%g: fd %.2f hd %.2f ris %.2f dBm; ", r, mw_to_dbm(f), mw_to_dbm(h),
                  mw_to_dbm(s));
  }
  // One-sided paired t-test on per-trial dB differences, H1: hd > ris.
  std::vector<double> d;
  for (std::size_t t = 0; t < hd[6.0].size(); ++t)
    d.push_back(mw_to_dbm(hd[6.0][t]) - mw_to_dbm(ris[6.0][t]));
  const double m = mean(d);
  double var = 0.0;
  for (double x : d) var += (x - m) * (x - m);
  var /= static_cast<double>(d.size() - 1);
  const double tstat = m / std::sqrt(var / static_cast<double>(d.size()));
  const double tcrit = 1.6604;  // Student t, 99 degrees of freedom, 95% one-sided
  const bool ris_beats_hd = std::isfinite(tstat) && tstat > tcrit;
  ok = ok && ris_beats_hd;
  detail += fmt("R=6 paired hd - ris = %.2f dB (t = %.2f, need > %.4f)", m, tstat, tcrit);
  return {ok, detail};
}

Outcome element_count_direction() {
  auto reduction = [](Mode m) {
    auto p = powers_by_sweep(run_experiment(
        trend_config(m, SweepVariable::L, {20.0, 180.0}, Placement::Midpoint, 2.0)));
    return mw_to_dbm(mean(p[20.0])) - mw_to_dbm(mean(p[180.0]));
  };
  const double hd = reduction(Mode::HalfDuplex);
  const double fd = reduction(Mode::FullDuplex);
  const double ris = reduction(Mode::RisOnly);
  return {fd > ris && hd > fd,
          fmt("reduction from L=20 to L=180: hd %.3f dB, fd %.3f dB, ris-only %.3f dB", hd, fd,
              ris)};
}

Outcome dead_ris_equivalence() {
  int same = 0;
  const int n = 20;
  for (int i = 0; i < n; ++i) {
    const ChannelSet dead = default_scenario(40000 + i).without_ris();
    const double rth = 1.0 + i % 4;
    const HalfDuplexSolution a = solve_half_duplex(dead, rth);
    const HalfDuplexSolution b = solve_relay_only_half_duplex(dead, rth);
    const FullDuplexSolution c = solve_full_duplex(dead, rth);
    const FullDuplexSolution d = solve_relay_only_full_duplex(dead, rth);
    if (a.W == b.W && a.U == b.U && a.theta1.v == b.theta1.v && a.theta2.v == b.theta2.v &&
        a.power_history == b.power_history && c.W == d.W && c.U == d.U &&
        c.theta.v == d.theta.v && c.power_history == d.power_history)
      ++same;
  }
  return {same == n, fmt("bit-identical on %d/%d instances", same, n)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism(const std::string& cli) {
  const fs::path dir = fs::temp_directory_path() / fmt("risrelay_accept_%d", static_cast<int>(::getpid()));
  fs::create_directories(dir);
  struct Case {
    const char* name;
    const char* json;
  };
  const Case cases[] = {
      {"fd", R"({"mode":"fd","rth":[1,3],"L":8,"trials":4,"seed":7})"},
      {"hd", R"({"mode":"hd","phase_solver":"refinement","b":2,"L":[4,8],"rth":2,"trials":3,"seed":3})"},
  };
  bool ok = true;
  int compared = 0;
  for (const Case& c : cases) {
    const fs::path cfg = dir / (std::string(c.name) + ".json");
    std::ofstream(cfg) << c.json;
    std::string text[2], summary[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / fmt("%s_%d.csv", c.name, run);
      if (cli.empty()) {
        const ExperimentConfig config = ExperimentConfig::load(cfg.string());
        write_experiment(run_experiment(config), out.string());
      } else {
        const std::string cmd = "\"" + cli + "\" simulate --config \"" + cfg.string() +
                                "\" --out \"" + out.string() + "\" 2>/dev/null";
        if (std::system(cmd.c_str()) != 0) return {false, "simulate exited with an error"};
      }
      text[run] = slurp(out);
      summary[run] = slurp(summary_path(out.string()));
    }
    ok = ok && !text[0].empty() && text[0] == text[1] && summary[0] == summary[1];
    compared += 2;
  }
  fs::remove_all(dir);
  return {ok, fmt("%d file pairs byte-identical: %s (%s)", compared, ok ? "yes" : "no",
                  cli.empty() ? "in-process" : "via CLI")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string cli;
  std::vector<int> only, expect_fail;
  app.add_option("--cli", cli, "Path to the risrelay executable used by the determinism check");
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  app.add_option("--expect-fail", expect_fail, "Criteria known to fail")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"water-filling tightness", waterfilling_tightness},
      {"duality tightness", duality_tightness},
      {"zero-forcing correctness and dominance", zf_dominance},
      {"surrogate tangency and bound", surrogate_tangency},
      {"monotone descent", [] { return monotone_descent(300.0); }},
      {"discrete oracle bound", discrete_oracle_bound},
      {"rate-threshold ordering", rate_threshold_ordering},
      {"element-count reduction direction", element_count_direction},
      {"dead-RIS equivalence", dead_ris_equivalence},
      {"determinism", [&] { return determinism(cli); }},
  };
  const double budgets[] = {10, 30, 0, 0, 300, 0, 1800, 0, 0, 0};

  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budgets[i] > 0 && secs >= budgets[i]) {
      o.pass = false;
      o.detail += fmt(" [over the %.0f s budget]", budgets[i]);
    }
    std::string note;
    if (expected.count(id)) note = o.pass ? " [listed as expected failure]" : " [expected]";
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  "
              << criteria[i].first << " | " << o.detail << fmt(" | %.1f s", secs) << note
              << std::endl;
    if (o.pass == static_cast<bool>(expected.count(id))) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
