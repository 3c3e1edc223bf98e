// SPDX-License-Identifier: Apache-2.0

#include "risrelay/discrete_phases.hpp"

#include <cmath>
#include <numbers>

#include "solver_detail.hpp"

namespace risrelay {

double DiscretePhaseConfig::spacing() const { return 2.0 * std::numbers::pi / levels(); }

double DiscretePhaseConfig::level(int index) const { return index * spacing(); }

PhaseVector DiscretePhaseConfig::phases(const std::vector<int>& indices) const {
  std::vector<double> angles;
  angles.reserve(indices.size());
  for (int i : indices) angles.push_back(level(i));
  return PhaseVector::from_angles(angles);
}

void DiscretePhaseConfig::validate() const {
  if (bits < 1 || bits > 16) throw DomainError("discrete phases: bits must be in [1, 16]");
}

std::vector<int> quantize_levels(std::span<const double> theta, int bits) {
  const DiscretePhaseConfig cfg{bits};
  cfg.validate();
  const int n = cfg.levels();
  std::vector<int> out;
  out.reserve(theta.size());
  for (double t : theta) {
    const double x = wrap_angle(t) / cfg.spacing();
    int k = static_cast<int>(std::floor(x));
    if (x - k > 0.5) ++k;
    out.push_back(k % n);
  }
  return out;
}

std::vector<double> quantize_phases(std::span<const double> theta, int bits) {
  const DiscretePhaseConfig cfg{bits};
  std::vector<double> out;
  for (int k : quantize_levels(theta, bits)) out.push_back(cfg.level(k));
  return out;
}

namespace {

void check_levels(const ChannelSet& ch, Scheme scheme, const DiscretePhaseConfig& cfg,
                  const std::vector<int>& levels1, const std::vector<int>& levels2) {
  const auto L = static_cast<std::size_t>(ch.L());
  const bool two = scheme == Scheme::HalfDuplex;
  if (levels1.size() != L || (two && levels2.size() != L)) {
    throw DomainError("discrete phases: level vector length does not match L");
  }
  auto check = [&](const std::vector<int>& v) {
    for (int k : v) {
      if (k < 0 || k >= cfg.levels()) throw DomainError("discrete phases: level out of range");
    }
  };
  check(levels1);
  if (two) check(levels2);
}

}  // namespace

DiscreteSolution evaluate_discrete(const ChannelSet& ch, Scheme scheme, int bits,
                                   const std::vector<int>& levels1,
                                   const std::vector<int>& levels2, double rate_threshold,
                                   const SolverOptions& options) {
  const DiscretePhaseConfig cfg{bits};
  cfg.validate();
  check_levels(ch, scheme, cfg, levels1, levels2);

  DiscreteSolution out;
  out.scheme = scheme;
  out.bits = bits;
  out.levels1 = levels1;
  out.levels2 = scheme == Scheme::HalfDuplex ? levels2 : std::vector<int>{};
  out.theta1 = cfg.phases(out.levels1);
  out.theta2 = scheme == Scheme::HalfDuplex ? cfg.phases(out.levels2) : out.theta1;
  const BeamformingPoint p = detail::try_point([&] {
    return scheme_precoders(ch, scheme, out.theta1, out.theta2, rate_threshold, options);
  });
  out.W = p.W;
  out.U = p.U;
  out.total_power = p.total_power;
  out.power_history = {out.total_power};
  out.converged = true;
  out.evaluations = 1;
  return out;
}

DiscreteSolution successive_refinement(const ChannelSet& ch, Scheme scheme, double rate_threshold,
                                       int bits, const std::vector<int>& init1,
                                       const std::vector<int>& init2,
                                       const SolverOptions& options, int max_sweeps) {
  DiscreteSolution best =
      evaluate_discrete(ch, scheme, bits, init1, init2, rate_threshold, options);
  const DiscretePhaseConfig cfg{bits};
  const int L = ch.L();
  const int surfaces = scheme == Scheme::HalfDuplex ? 2 : 1;
  std::vector<double> history{best.total_power};
  std::uint64_t evaluations = 1;
  bool converged = false;
  int sweep = 0;

  while (sweep < max_sweeps) {
    ++sweep;
    bool changed = false;
    for (int s = 0; s < surfaces; ++s) {
      for (int l = 0; l < L; ++l) {
        const int current = (s == 0 ? best.levels1 : best.levels2)[static_cast<std::size_t>(l)];
        for (int k = 0; k < cfg.levels(); ++k) {
          if (k == current) continue;
          std::vector<int> l1 = best.levels1;
          std::vector<int> l2 = best.levels2;
          (s == 0 ? l1 : l2)[static_cast<std::size_t>(l)] = k;
          DiscreteSolution trial =
              evaluate_discrete(ch, scheme, bits, l1, l2, rate_threshold, options);
          ++evaluations;
          if (trial.total_power < best.total_power) {
            best = std::move(trial);
            changed = true;
          }
        }
        history.push_back(best.total_power);
      }
    }
    if (!changed) {
      converged = true;
      break;
    }
  }

  best.power_history = std::move(history);
  best.sweeps = sweep;
  best.converged = converged;
  best.evaluations = evaluations;
  return best;
}

DiscreteSolution brute_force_oracle(const ChannelSet& ch, Scheme scheme, double rate_threshold,
                                    int bits, const SolverOptions& options,
                                    std::uint64_t max_configurations) {
  const DiscretePhaseConfig cfg{bits};
  cfg.validate();
  const int L = ch.L();
  const int elements = (scheme == Scheme::HalfDuplex ? 2 : 1) * L;
  const int exponent = bits * elements;
  if (exponent >= 64 || (1ULL << exponent) > max_configurations) {
    throw SearchSpaceError("brute_force_oracle: search space exceeds the enumeration limit");
  }
  const std::uint64_t total = 1ULL << exponent;

  std::vector<int> digits(static_cast<std::size_t>(elements), 0);
  auto split = [&](std::vector<int>& l1, std::vector<int>& l2) {
    l1.assign(digits.begin(), digits.begin() + L);
    if (scheme == Scheme::HalfDuplex) l2.assign(digits.begin() + L, digits.end());
    else l2.clear();
  };

  DiscreteSolution best;
  best.total_power = detail::kInf;
  std::vector<double> history;
  for (std::uint64_t c = 0; c < total; ++c) {
    std::uint64_t code = c;
    for (auto& d : digits) {
      d = static_cast<int>(code & static_cast<std::uint64_t>(cfg.levels() - 1));
      code >>= bits;
    }
    std::vector<int> l1;
    std::vector<int> l2;
    split(l1, l2);
    DiscreteSolution trial = evaluate_discrete(ch, scheme, bits, l1, l2, rate_threshold, options);
    if (c == 0 || trial.total_power < best.total_power) best = std::move(trial);
    history.push_back(best.total_power);
  }
  best.power_history = std::move(history);
  best.sweeps = 1;
  best.converged = true;
  best.evaluations = total;
  return best;
}

}  // namespace risrelay
