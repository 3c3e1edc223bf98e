// SPDX-License-Identifier: Apache-2.0
//
// Options and result types shared by the alternating solvers.

#pragma once

#include <limits>
#include <string>
#include <vector>

#include "risrelay/precoding.hpp"

namespace risrelay {

enum class RelaySolver { Duality, ZeroForcing };

/// Transmission scheme a set of phases is evaluated under.
enum class Scheme { HalfDuplex, FullDuplex, RisOnly };

struct SolverOptions {
  RelaySolver relay_solver = RelaySolver::Duality;
  double outer_tol = 1e-4;  // relative change of total power
  double inner_tol = 1e-6;  // fixed-point vector change
  int max_outer = 50;
  int max_inner = 1000;
  DualityOptions duality;
};

/// Precoders for a fixed phase configuration.
struct BeamformingPoint {
  CMatrix W;
  CMatrix U;
  double total_power = std::numeric_limits<double>::infinity();
};

/// Constraint margins recomputed from scratch, in bits per symbol.
struct ValidationReport {
  double relay_margin = std::numeric_limits<double>::infinity();
  std::vector<double> user_margins;
  double tolerance = 1e-6;

  double min_margin() const;
  bool ok() const { return min_margin() >= -tolerance; }
};

/// Achieved per-user rates and the relay rate of a configuration.
struct AchievedRates {
  double relay_rate = std::numeric_limits<double>::infinity();
  std::vector<double> user_rates;
};

std::string to_string(RelaySolver solver);
std::string to_string(Scheme scheme);

/// Relay precoder from the configured solver.
CMatrix relay_precoder(const CMatrix& rows, std::span<const double> user_noise,
                       std::span<const double> targets, const SolverOptions& options);

}  // namespace risrelay
