// SPDX-License-Identifier: Apache-2.0

#include "risrelay/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "solver_detail.hpp"

namespace risrelay {

BeamformingPoint ris_only_precoder(const ChannelSet& ch, const PhaseVector& theta,
                                   double rate_threshold, const SolverOptions& options) {
  if (!(rate_threshold >= 0.0)) throw DomainError("ris-only: negative rate threshold");
  const int K = ch.K();
  const EffectiveChannels eff = effective_channels(ch, theta, theta);
  const std::vector<double> noise(static_cast<std::size_t>(K), ch.noise_power);
  const std::vector<double> eta(static_cast<std::size_t>(K), detail::qos_target(rate_threshold));

  BeamformingPoint out;
  out.W = relay_precoder(eff.h_TI, noise, eta, options);
  out.U = CMatrix::Zero(ch.N(), K);
  out.total_power = out.W.squaredNorm();
  return out;
}

namespace {

RisOnlySolution package(const ChannelSet& ch, const PhaseVector& theta,
                        const BeamformingPoint& point) {
  RisOnlySolution sol;
  sol.W = point.W;
  sol.theta = theta;
  sol.total_power = point.total_power;
  const EffectiveChannels eff = effective_channels(ch, theta, theta);
  for (int k = 0; k < ch.K(); ++k) {
    sol.user_rates.push_back(std::log2(1.0 + link_sinr(eff.h_TI, point.W, ch.noise_power, k)));
  }
  return sol;
}

}  // namespace

RisOnlySolution ris_only_at(const ChannelSet& ch, const PhaseVector& theta, double rate_threshold,
                            const SolverOptions& options) {
  RisOnlySolution sol = package(ch, theta, ris_only_precoder(ch, theta, rate_threshold, options));
  sol.power_history = {sol.total_power};
  sol.converged = true;
  return sol;
}

RisOnlySolution solve_ris_only(const ChannelSet& ch, double rate_threshold,
                               const SolverOptions& options) {
  ch.validate();
  PhaseVector theta = PhaseVector::identity(ch.L());
  BeamformingPoint point = ris_only_precoder(ch, theta, rate_threshold, options);
  std::vector<double> history{point.total_power};
  bool converged = false;
  int outer = 0;

  while (outer < options.max_outer) {
    ++outer;
    const double previous = point.total_power;
    const PhaseVector cand =
        fixed_point_phase(desired_signal_blocks(ch, point.W, CouplingSide::BaseStation), theta,
                          options.inner_tol, options.max_inner)
            .phases;
    BeamformingPoint next = detail::try_point(
        [&] { return ris_only_precoder(ch, cand, rate_threshold, options); });
    if (next.total_power < point.total_power) {
      theta = cand;
      point = std::move(next);
    }
    history.push_back(point.total_power);
    if (detail::power_settled(previous, point.total_power, options.outer_tol)) {
      converged = true;
      break;
    }
  }

  point = ris_only_precoder(ch, theta, rate_threshold, options);
  RisOnlySolution sol = package(ch, theta, point);
  sol.power_history = std::move(history);
  sol.converged = converged;
  sol.outer_iterations = outer;
  return sol;
}

ValidationReport validate_ris_only(const ChannelSet& ch, const RisOnlySolution& solution,
                                   double rate_threshold) {
  const EffectiveChannels eff = effective_channels(ch, solution.theta, solution.theta);
  ValidationReport report;
  for (int k = 0; k < ch.K(); ++k) {
    const double rate = std::log2(1.0 + link_sinr(eff.h_TI, solution.W, ch.noise_power, k));
    report.user_margins.push_back(rate - rate_threshold);
  }
  return report;
}

HalfDuplexSolution solve_relay_only_half_duplex(const ChannelSet& ch, double rate_threshold,
                                                const SolverOptions& options) {
  return solve_half_duplex(ch.without_ris(), rate_threshold, options);
}

FullDuplexSolution solve_relay_only_full_duplex(const ChannelSet& ch, double rate_threshold,
                                                const SolverOptions& options) {
  return solve_full_duplex(ch.without_ris(), rate_threshold, options);
}

BeamformingPoint scheme_precoders(const ChannelSet& ch, Scheme scheme, const PhaseVector& theta1,
                                  const PhaseVector& theta2, double rate_threshold,
                                  const SolverOptions& options) {
  switch (scheme) {
    case Scheme::HalfDuplex:
      return half_duplex_precoders(ch, theta1, theta2, rate_threshold, options);
    case Scheme::FullDuplex:
      return full_duplex_precoders(ch, theta1, rate_threshold, options);
    case Scheme::RisOnly:
      return ris_only_precoder(ch, theta1, rate_threshold, options);
  }
  throw DomainError("scheme_precoders: unknown scheme");
}

AchievedRates scheme_rates(const ChannelSet& ch, Scheme scheme, const PhaseVector& theta1,
                           const PhaseVector& theta2, const CMatrix& W, const CMatrix& U) {
  switch (scheme) {
    case Scheme::HalfDuplex:
      return half_duplex_rates(ch, theta1, theta2, W, U);
    case Scheme::FullDuplex:
      return full_duplex_rates(ch, theta1, W, U);
    case Scheme::RisOnly: {
      AchievedRates out;
      const EffectiveChannels eff = effective_channels(ch, theta1, theta1);
      for (int k = 0; k < ch.K(); ++k) {
        out.user_rates.push_back(std::log2(1.0 + link_sinr(eff.h_TI, W, ch.noise_power, k)));
      }
      return out;
    }
  }
  throw DomainError("scheme_rates: unknown scheme");
}

ValidationReport validate_scheme(const ChannelSet& ch, Scheme scheme, const PhaseVector& theta1,
                                 const PhaseVector& theta2, const CMatrix& W, const CMatrix& U,
                                 double rate_threshold) {
  const AchievedRates rates = scheme_rates(ch, scheme, theta1, theta2, W, U);
  const double scale = scheme == Scheme::HalfDuplex ? 2.0 : 1.0;
  ValidationReport report;
  if (scheme != Scheme::RisOnly) {
    report.relay_margin = rates.relay_rate - scale * ch.K() * rate_threshold;
  }
  for (double r : rates.user_rates) report.user_margins.push_back(r - scale * rate_threshold);
  return report;
}

double min_user_rate(Scheme scheme, const AchievedRates& rates) {
  const double scale = scheme == Scheme::HalfDuplex ? 2.0 : 1.0;
  const auto K = static_cast<double>(rates.user_rates.size());
  double m = std::numeric_limits<double>::infinity();
  if (scheme != Scheme::RisOnly && K > 0) m = rates.relay_rate / (scale * K);
  for (double r : rates.user_rates) m = std::min(m, r / scale);
  return m;
}

}  // namespace risrelay
