// SPDX-License-Identifier: Apache-2.0

#include "risrelay/half_duplex.hpp"

#include <algorithm>
#include <cmath>

#include "solver_detail.hpp"

namespace risrelay {

double compute_eta(double gamma_first, double rate_threshold) {
  return std::max(0.0, std::exp2(2.0 * rate_threshold) - 1.0 - gamma_first);
}

double compute_eta(const ChannelSet& ch, const PhaseVector& theta1, const CMatrix& W,
                   double rate_threshold, int k) {
  const EffectiveChannels eff = effective_channels(ch, theta1, theta1);
  return compute_eta(link_sinr(eff.h_TI, W, ch.noise_power, k), rate_threshold);
}

BeamformingPoint half_duplex_precoders(const ChannelSet& ch, const PhaseVector& theta1,
                                       const PhaseVector& theta2, double rate_threshold,
                                       const SolverOptions& options) {
  if (!(rate_threshold >= 0.0)) throw DomainError("half duplex: negative rate threshold");
  const int K = ch.K();
  const EffectiveChannels eff = effective_channels(ch, theta1, theta2);

  BeamformingPoint out;
  out.W = svd_waterfilling(eff.H_TIR, ch.noise_power, 2.0 * K * rate_threshold, K).W;

  std::vector<double> eta(static_cast<std::size_t>(K));
  const std::vector<double> noise(static_cast<std::size_t>(K), ch.noise_power);
  for (int k = 0; k < K; ++k) {
    eta[static_cast<std::size_t>(k)] =
        compute_eta(link_sinr(eff.h_TI, out.W, ch.noise_power, k), rate_threshold);
  }
  out.U = relay_precoder(eff.h_RI, noise, eta, options);
  out.total_power = 0.5 * (out.W.squaredNorm() + out.U.squaredNorm());
  return out;
}

AchievedRates half_duplex_rates(const ChannelSet& ch, const PhaseVector& theta1,
                                const PhaseVector& theta2, const CMatrix& W, const CMatrix& U) {
  const EffectiveChannels eff = effective_channels(ch, theta1, theta2);
  AchievedRates out;
  out.relay_rate = relay_rate(eff.H_TIR, W, ch.noise_power);
  for (int k = 0; k < ch.K(); ++k) {
    const HalfDuplexSinr s = half_duplex_sinr(eff, W, U, ch.noise_power, k);
    out.user_rates.push_back(std::log2(1.0 + s.first + s.second));
  }
  return out;
}

namespace {

HalfDuplexSolution package(const ChannelSet& ch, const PhaseVector& theta1,
                           const PhaseVector& theta2, const BeamformingPoint& point) {
  HalfDuplexSolution sol;
  sol.W = point.W;
  sol.U = point.U;
  sol.theta1 = theta1;
  sol.theta2 = theta2;
  sol.total_power = point.total_power;
  const AchievedRates rates = half_duplex_rates(ch, theta1, theta2, point.W, point.U);
  sol.relay_rate = rates.relay_rate;
  sol.user_rates = rates.user_rates;
  return sol;
}

}  // namespace

HalfDuplexSolution half_duplex_at(const ChannelSet& ch, const PhaseVector& theta1,
                                  const PhaseVector& theta2, double rate_threshold,
                                  const SolverOptions& options) {
  HalfDuplexSolution sol =
      package(ch, theta1, theta2, half_duplex_precoders(ch, theta1, theta2, rate_threshold, options));
  sol.power_history = {sol.total_power};
  sol.converged = true;
  return sol;
}

HalfDuplexSolution solve_half_duplex(const ChannelSet& ch, double rate_threshold,
                                     const SolverOptions& options) {
  ch.validate();
  const int L = ch.L();
  PhaseVector theta1 = PhaseVector::identity(L);
  PhaseVector theta2 = PhaseVector::identity(L);

  auto evaluate = [&](const PhaseVector& t1, const PhaseVector& t2) {
    return detail::try_point(
        [&] { return half_duplex_precoders(ch, t1, t2, rate_threshold, options); });
  };

  // The starting point has to be feasible; its errors propagate.
  BeamformingPoint point = half_duplex_precoders(ch, theta1, theta2, rate_threshold, options);
  std::vector<double> history{point.total_power};
  bool converged = false;
  int outer = 0;

  while (outer < options.max_outer) {
    ++outer;
    const double previous = point.total_power;

    // Theta1: relay-rate step against desired-signal alignment at the users.
    const PhaseVector cand_a =
        linearized_phase_step(surrogate_relay_rate(ch, theta1, point.W), theta1);
    const PhaseVector cand_b =
        fixed_point_phase(desired_signal_blocks(ch, point.W, CouplingSide::BaseStation), theta1,
                          options.inner_tol, options.max_inner)
            .phases;
    BeamformingPoint pa = evaluate(cand_a, theta2);
    BeamformingPoint pb = evaluate(cand_b, theta2);
    const bool pick_a = pa.total_power <= pb.total_power;
    BeamformingPoint& best = pick_a ? pa : pb;
    if (best.total_power < point.total_power) {
      theta1 = pick_a ? cand_a : cand_b;
      point = std::move(best);
    }

    const PhaseVector cand_2 =
        fixed_point_phase(desired_signal_blocks(ch, point.U, CouplingSide::Relay), theta2,
                          options.inner_tol, options.max_inner)
            .phases;
    BeamformingPoint p2 = evaluate(theta1, cand_2);
    if (p2.total_power < point.total_power) {
      theta2 = cand_2;
      point = std::move(p2);
    }

    history.push_back(point.total_power);
    if (detail::power_settled(previous, point.total_power, options.outer_tol)) {
      converged = true;
      break;
    }
  }

  // Final refresh of both precoders at the retained phases.
  point = half_duplex_precoders(ch, theta1, theta2, rate_threshold, options);
  HalfDuplexSolution sol = package(ch, theta1, theta2, point);
  sol.power_history = std::move(history);
  sol.converged = converged;
  sol.outer_iterations = outer;
  return sol;
}

ValidationReport validate_half_duplex(const ChannelSet& ch, const HalfDuplexSolution& solution,
                                      double rate_threshold) {
  const AchievedRates rates =
      half_duplex_rates(ch, solution.theta1, solution.theta2, solution.W, solution.U);
  ValidationReport report;
  report.relay_margin = rates.relay_rate - 2.0 * ch.K() * rate_threshold;
  for (double r : rates.user_rates) report.user_margins.push_back(r - 2.0 * rate_threshold);
  return report;
}

}  // namespace risrelay
