// SPDX-License-Identifier: Apache-2.0
//
// Full-duplex relaying: the BS and the relay transmit simultaneously under a
// single RIS configuration. Relay self-interference is assumed cancelled; the
// BS signal reaching a user is counted as noise there.

#pragma once

#include "risrelay/scheme.hpp"

namespace risrelay {

struct FullDuplexSolution {
  CMatrix W;
  CMatrix U;
  PhaseVector theta;
  double total_power = 0.0;
  double relay_rate = 0.0;
  std::vector<double> user_rates;  // log2(1 + SINR), must reach R_th
  std::vector<double> power_history;
  bool converged = false;
  int outer_iterations = 0;
};

BeamformingPoint full_duplex_precoders(const ChannelSet& ch, const PhaseVector& theta,
                                       double rate_threshold, const SolverOptions& options = {});

AchievedRates full_duplex_rates(const ChannelSet& ch, const PhaseVector& theta, const CMatrix& W,
                                const CMatrix& U);

FullDuplexSolution solve_full_duplex(const ChannelSet& ch, double rate_threshold,
                                     const SolverOptions& options = {});

FullDuplexSolution full_duplex_at(const ChannelSet& ch, const PhaseVector& theta,
                                  double rate_threshold, const SolverOptions& options = {});

ValidationReport validate_full_duplex(const ChannelSet& ch, const FullDuplexSolution& solution,
                                      double rate_threshold);

}  // namespace risrelay
