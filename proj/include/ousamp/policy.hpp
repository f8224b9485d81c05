// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "ousamp/process.hpp"

namespace ousamp {

struct ThresholdSpec {
    double beta = 0.0;
    double v = 0.0;
};

/// Sampling policies. All of them submit only while the channel is idle.
struct PolicyKind {
    enum class Kind { OptimalThreshold, ZeroWait, Periodic };

    Kind kind = Kind::ZeroWait;
    ThresholdSpec threshold{};
    double period = 0.0;

    static PolicyKind optimal_threshold(ThresholdSpec t) { return {Kind::OptimalThreshold, t, 0.0}; }
    static PolicyKind zero_wait() { return {Kind::ZeroWait, {}, 0.0}; }
    static PolicyKind periodic(double period);

    std::string describe() const;
};

/// Threshold on |X_t - Xhat_t| for a candidate optimal cost beta:
///   theta > 0:  (sigma/sqrt(theta))  G^{-1}(ratio)
///   theta = 0:  sqrt(3 (beta - mse_y))
///   theta < 0:  (sigma/sqrt(-theta)) K^{-1}(ratio)
/// with ratio = (s - mse_y) / (s - beta), s = sigma^2 / (2 theta).
/// Requires beta >= mse_y, and beta < s when theta > 0.
double threshold_v(double beta, const OuParams& params, double mse_y);

/// First periodic tick strictly after the last sampling time.
double next_periodic_tick(double last_sample, double period);

/// Whether to take a sample at time t. `last_sample` is only consulted by
/// the periodic policy.
bool decide_sample(double t, double signal, double estimate, bool idle, const PolicyKind& policy,
                   double last_sample = 0.0);

}  // namespace ousamp
