// SPDX-License-Identifier: Apache-2.0
//
// Reference systems: relay without RIS, and RIS without relay.

#pragma once

#include "risrelay/full_duplex.hpp"
#include "risrelay/half_duplex.hpp"

namespace risrelay {

enum class Duplex { Half, Full };

struct RisOnlySolution {
  CMatrix W;
  PhaseVector theta;
  double total_power = 0.0;
  std::vector<double> user_rates;
  std::vector<double> power_history;
  bool converged = false;
  int outer_iterations = 0;
};

/// Single-hop BS precoder by duality over h_I^H Theta H_TI + h_T^H
/// (zero-forcing when configured).
BeamformingPoint ris_only_precoder(const ChannelSet& ch, const PhaseVector& theta,
                                   double rate_threshold, const SolverOptions& options = {});

RisOnlySolution solve_ris_only(const ChannelSet& ch, double rate_threshold,
                               const SolverOptions& options = {});

RisOnlySolution ris_only_at(const ChannelSet& ch, const PhaseVector& theta,
                            double rate_threshold, const SolverOptions& options = {});

ValidationReport validate_ris_only(const ChannelSet& ch, const RisOnlySolution& solution,
                                   double rate_threshold);

/// Relay-assisted system with every reflected path removed.
HalfDuplexSolution solve_relay_only_half_duplex(const ChannelSet& ch, double rate_threshold,
                                                const SolverOptions& options = {});
FullDuplexSolution solve_relay_only_full_duplex(const ChannelSet& ch, double rate_threshold,
                                                const SolverOptions& options = {});

/// Precoders of any scheme at fixed phases. `theta2` is only read in
/// half-duplex; the relay precoder is zero for the RIS-only scheme.
BeamformingPoint scheme_precoders(const ChannelSet& ch, Scheme scheme, const PhaseVector& theta1,
                                  const PhaseVector& theta2, double rate_threshold,
                                  const SolverOptions& options = {});

AchievedRates scheme_rates(const ChannelSet& ch, Scheme scheme, const PhaseVector& theta1,
                           const PhaseVector& theta2, const CMatrix& W, const CMatrix& U);

ValidationReport validate_scheme(const ChannelSet& ch, Scheme scheme, const PhaseVector& theta1,
                                 const PhaseVector& theta2, const CMatrix& W, const CMatrix& U,
                                 double rate_threshold);

/// Smallest per-user rate in units of the QoS threshold, with the relay rate
/// shared equally among the users where a relay decodes.
double min_user_rate(Scheme scheme, const AchievedRates& rates);

}  // namespace risrelay
