// SPDX-License-Identifier: Apache-2.0

#include "risrelay/scheme.hpp"

#include <algorithm>

namespace risrelay {

double ValidationReport::min_margin() const {
  double m = relay_margin;
  for (double u : user_margins) m = std::min(m, u);
  return m;
}

std::string to_string(RelaySolver solver) {
  return solver == RelaySolver::Duality ? "duality" : "zf";
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::HalfDuplex: return "hd";
    case Scheme::FullDuplex: return "fd";
    case Scheme::RisOnly: return "ris-only";
  }
  return "unknown";
}

CMatrix relay_precoder(const CMatrix& rows, std::span<const double> user_noise,
                       std::span<const double> targets, const SolverOptions& options) {
  if (options.relay_solver == RelaySolver::ZeroForcing) {
    return zero_forcing(rows, targets, user_noise);
  }
  return duality_beamforming(rows, user_noise, targets, options.duality).U;
}

}  // namespace risrelay
