// SPDX-License-Identifier: Apache-2.0
//
// Helpers shared by the alternating solvers. Not installed.

#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "risrelay/scheme.hpp"

namespace risrelay::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Evaluate a candidate, mapping stage infeasibility to infinite power.
template <class Fn>
BeamformingPoint try_point(Fn&& fn) {
  try {
    return std::forward<Fn>(fn)();
  } catch (const InfeasibleError&) {
  } catch (const ConvergenceError&) {
  } catch (const SingularError&) {
  }
  return {};
}

inline bool power_settled(double previous, double current, double tol) {
  return std::abs(previous - current) <= tol * std::max(current, 1e-300);
}

inline double qos_target(double rate_threshold) { return std::exp2(rate_threshold) - 1.0; }

}  // namespace risrelay::detail
