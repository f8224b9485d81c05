// SPDX-License-Identifier: Apache-2.0
#pragma once

// MMSE reconstruction from the latest delivered sample:
//   Xhat_t = Q e^{-theta (t - S)} + mu (1 - e^{-theta (t - S)}),  t in [D_i, D_{i+1})
// The estimator ignores the fact that nothing newer has arrived.

#include <optional>
#include <span>

#include "ousamp/channel.hpp"
#include "ousamp/process.hpp"

namespace ousamp {

struct EstimatorState {
    OuParams params;
    double x0 = 0.0;  // known initial signal value
    std::optional<SamplePacket> last_packet;
};

/// Throws StaleState if t precedes the last recorded delivery.
double estimate(double t, const EstimatorState& state);

/// Records a delivery; deliveries must arrive in nondecreasing order.
void deliver(EstimatorState& state, const SamplePacket& packet);

/// Trapezoidal integral of (signal - estimate)^2 over the grid `times`,
/// with one estimator state valid on the whole segment.
double error_path_integral(std::span<const double> times, std::span<const double> signal,
                           const EstimatorState& state);

/// Trapezoidal integral of f^2 over a grid.
double trapezoid_squared(std::span<const double> times, std::span<const double> values);

}  // namespace ousamp
