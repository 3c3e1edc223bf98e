// SPDX-License-Identifier: Apache-2.0
//
// Finite-resolution RIS phases: level set {0, d, ..., (2^b - 1) d} with
// d = 2 pi / 2^b. Nearest-level quantisation, element-wise coordinate
// descent, and an exhaustive oracle for small surfaces.

#pragma once

#include <cstdint>
#include <vector>

#include "risrelay/baselines.hpp"

namespace risrelay {

struct DiscretePhaseConfig {
  int bits = 1;

  int levels() const { return 1 << bits; }
  double spacing() const;
  double level(int index) const;
  PhaseVector phases(const std::vector<int>& indices) const;
  void validate() const;
};

/// Nearest level index under circular distance; exact midpoints go to the
/// lower level.
std::vector<int> quantize_levels(std::span<const double> theta, int bits);
std::vector<double> quantize_phases(std::span<const double> theta, int bits);

struct DiscreteSolution {
  Scheme scheme = Scheme::FullDuplex;
  int bits = 1;
  std::vector<int> levels1;
  std::vector<int> levels2;  // half-duplex only
  PhaseVector theta1;
  PhaseVector theta2;
  CMatrix W;
  CMatrix U;
  double total_power = 0.0;  // +inf when no evaluated configuration was feasible
  std::vector<double> power_history;  // start value, then one entry per element update
  int sweeps = 0;
  bool converged = false;  // last sweep changed nothing
  std::uint64_t evaluations = 0;
};

/// Precoders at a fixed discrete configuration. Infeasible configurations
/// yield +inf power instead of throwing.
DiscreteSolution evaluate_discrete(const ChannelSet& ch, Scheme scheme, int bits,
                                   const std::vector<int>& levels1,
                                   const std::vector<int>& levels2, double rate_threshold,
                                   const SolverOptions& options = {});

/// Coordinate descent over the elements in ascending index (first-phase
/// surface before second-phase surface in half-duplex). Every level is
/// tried with a full precoder re-solve; ties keep the current level.
DiscreteSolution successive_refinement(const ChannelSet& ch, Scheme scheme, double rate_threshold,
                                       int bits, const std::vector<int>& init1,
                                       const std::vector<int>& init2,
                                       const SolverOptions& options = {}, int max_sweeps = 3);

/// Exhaustive minimum over every configuration. Refuses with
/// SearchSpaceError when more than `max_configurations` would be visited.
DiscreteSolution brute_force_oracle(const ChannelSet& ch, Scheme scheme, double rate_threshold,
                                    int bits, const SolverOptions& options = {},
                                    std::uint64_t max_configurations = 1ULL << 16);

}  // namespace risrelay
