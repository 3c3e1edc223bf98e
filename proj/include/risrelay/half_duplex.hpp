// SPDX-License-Identifier: Apache-2.0
//
// Two-phase relaying: BS -> relay (and users) in phase one, relay -> users in
// phase two, separate RIS configurations per phase. Power carries the 1/2
// duty-cycle factor of each node.

#pragma once

#include "risrelay/scheme.hpp"

namespace risrelay {

struct HalfDuplexSolution {
  CMatrix W;
  CMatrix U;
  PhaseVector theta1;
  PhaseVector theta2;
  double total_power = 0.0;
  double relay_rate = 0.0;
  std::vector<double> user_rates;  // log2(1 + gamma_1 + gamma_2), must reach 2 R_th
  std::vector<double> power_history;
  bool converged = false;
  int outer_iterations = 0;
};

/// max(0, 2^(2 R_th) - 1 - gamma_first)
double compute_eta(double gamma_first, double rate_threshold);
double compute_eta(const ChannelSet& ch, const PhaseVector& theta1, const CMatrix& W,
                   double rate_threshold, int k);

/// W by water-filling, U by the configured relay solver, for fixed phases.
BeamformingPoint half_duplex_precoders(const ChannelSet& ch, const PhaseVector& theta1,
                                       const PhaseVector& theta2, double rate_threshold,
                                       const SolverOptions& options = {});

/// Fill rates for precoders at fixed phases.
AchievedRates half_duplex_rates(const ChannelSet& ch, const PhaseVector& theta1,
                                const PhaseVector& theta2, const CMatrix& W, const CMatrix& U);

/// Alternating optimisation of W, U, Theta1 and Theta2 starting from zero
/// phases. Every phase update is kept only if it lowers the total power.
HalfDuplexSolution solve_half_duplex(const ChannelSet& ch, double rate_threshold,
                                     const SolverOptions& options = {});

/// Package precoders at fixed phases as a solution (no iterations).
HalfDuplexSolution half_duplex_at(const ChannelSet& ch, const PhaseVector& theta1,
                                  const PhaseVector& theta2, double rate_threshold,
                                  const SolverOptions& options = {});

ValidationReport validate_half_duplex(const ChannelSet& ch, const HalfDuplexSolution& solution,
                                      double rate_threshold);

}  // namespace risrelay
