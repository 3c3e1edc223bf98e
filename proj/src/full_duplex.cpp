// SPDX-License-Identifier: Apache-2.0

#include "risrelay/full_duplex.hpp"

#include <cmath>

#include "solver_detail.hpp"

namespace risrelay {

BeamformingPoint full_duplex_precoders(const ChannelSet& ch, const PhaseVector& theta,
                                       double rate_threshold, const SolverOptions& options) {
  if (!(rate_threshold >= 0.0)) throw DomainError("full duplex: negative rate threshold");
  const int K = ch.K();
  const EffectiveChannels eff = effective_channels(ch, theta, theta);

  BeamformingPoint out;
  out.W = svd_waterfilling(eff.H_TIR, ch.noise_power, K * rate_threshold, K).W;

  // BS interference at each user is part of the relay link's noise.
  const std::vector<double> noise = full_duplex_user_noise(eff, out.W, ch.noise_power);
  const std::vector<double> eta(static_cast<std::size_t>(K), detail::qos_target(rate_threshold));
  out.U = relay_precoder(eff.h_RI, noise, eta, options);
  out.total_power = out.W.squaredNorm() + out.U.squaredNorm();
  return out;
}

AchievedRates full_duplex_rates(const ChannelSet& ch, const PhaseVector& theta, const CMatrix& W,
                                const CMatrix& U) {
  const EffectiveChannels eff = effective_channels(ch, theta, theta);
  AchievedRates out;
  out.relay_rate = relay_rate(eff.H_TIR, W, ch.noise_power);
  for (int k = 0; k < ch.K(); ++k) {
    out.user_rates.push_back(std::log2(1.0 + full_duplex_sinr(eff, W, U, ch.noise_power, k)));
  }
  return out;
}

namespace {

FullDuplexSolution package(const ChannelSet& ch, const PhaseVector& theta,
                           const BeamformingPoint& point) {
  FullDuplexSolution sol;
  sol.W = point.W;
  sol.U = point.U;
  sol.theta = theta;
  sol.total_power = point.total_power;
  const AchievedRates rates = full_duplex_rates(ch, theta, point.W, point.U);
  sol.relay_rate = rates.relay_rate;
  sol.user_rates = rates.user_rates;
  return sol;
}

}  // namespace

FullDuplexSolution full_duplex_at(const ChannelSet& ch, const PhaseVector& theta,
                                  double rate_threshold, const SolverOptions& options) {
  FullDuplexSolution sol =
      package(ch, theta, full_duplex_precoders(ch, theta, rate_threshold, options));
  sol.power_history = {sol.total_power};
  sol.converged = true;
  return sol;
}

FullDuplexSolution solve_full_duplex(const ChannelSet& ch, double rate_threshold,
                                     const SolverOptions& options) {
  ch.validate();
  PhaseVector theta = PhaseVector::identity(ch.L());

  auto evaluate = [&](const PhaseVector& t) {
    return detail::try_point([&] { return full_duplex_precoders(ch, t, rate_threshold, options); });
  };

  BeamformingPoint point = full_duplex_precoders(ch, theta, rate_threshold, options);
  std::vector<double> history{point.total_power};
  bool converged = false;
  int outer = 0;

  while (outer < options.max_outer) {
    ++outer;
    const double previous = point.total_power;

    const PhaseVector cand_a =
        linearized_phase_step(surrogate_relay_rate(ch, theta, point.W), theta);
    const PhaseVector cand_b =
        fixed_point_phase(desired_signal_blocks(ch, point.U, CouplingSide::Relay), theta,
                          options.inner_tol, options.max_inner)
            .phases;
    BeamformingPoint pa = evaluate(cand_a);
    BeamformingPoint pb = evaluate(cand_b);
    const bool pick_a = pa.total_power <= pb.total_power;
    BeamformingPoint& best = pick_a ? pa : pb;
    if (best.total_power < point.total_power) {
      theta = pick_a ? cand_a : cand_b;
      point = std::move(best);
    }

    history.push_back(point.total_power);
    if (detail::power_settled(previous, point.total_power, options.outer_tol)) {
      converged = true;
      break;
    }
  }

  point = full_duplex_precoders(ch, theta, rate_threshold, options);
  FullDuplexSolution sol = package(ch, theta, point);
  sol.power_history = std::move(history);
  sol.converged = converged;
  sol.outer_iterations = outer;
  return sol;
}

ValidationReport validate_full_duplex(const ChannelSet& ch, const FullDuplexSolution& solution,
                                      double rate_threshold) {
  const AchievedRates rates = full_duplex_rates(ch, solution.theta, solution.W, solution.U);
  ValidationReport report;
  report.relay_margin = rates.relay_rate - ch.K() * rate_threshold;
  for (double r : rates.user_rates) report.user_margins.push_back(r - rate_threshold);
  return report;
}

}  // namespace risrelay
