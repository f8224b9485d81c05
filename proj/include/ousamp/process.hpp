// SPDX-License-Identifier: Apache-2.0
#pragma once

// Exact simulation of the Ornstein-Uhlenbeck signal
//   dX = theta (mu - X) dt + sigma dW
// and of the centred gap process O_t (O_0 = 0, mu = 0) that governs the
// estimation error after each sample.

#include <cstddef>
#include <cstdint>
#include <limits>

#include "ousamp/channel.hpp"
#include "ousamp/random.hpp"

namespace ousamp {

/// |theta| below this routes to the Wiener formulas.
inline constexpr double kWienerCutoff = 1e-10;

struct OuParams {
    double theta = 0.0;
    double mu = 0.0;
    double sigma = 1.0;

    enum class Regime { Stable, Wiener, Unstable };

    Regime regime() const noexcept {
        if (theta >= kWienerCutoff) return Regime::Stable;
        if (theta <= -kWienerCutoff) return Regime::Unstable;
        return Regime::Wiener;
    }
    bool is_wiener() const noexcept { return regime() == Regime::Wiener; }
    /// sigma^2 / (2 theta); negative for unstable processes.
    double stationary_scale() const noexcept { return sigma * sigma / (2.0 * theta); }
    void validate() const;
};

struct GapSample {
    double y = 0.0;
    double value = 0.0;
};

/// One exact step X_{t+dt} = decay * X_t + shift + stddev * Z.
struct TransitionCoeffs {
    double decay = 1.0;
    double shift = 0.0;
    double stddev = 0.0;
};

TransitionCoeffs transition_coeffs(double dt, const OuParams& p);

double transition_sample(double x, double dt, const OuParams& p, RandomStream& rng);

/// Var[O_y | O_0 = 0].
double gap_variance(double y, const OuParams& p);

GapSample sample_gap(double y, const OuParams& p, RandomStream& rng);

/// E[gap_variance(Y)]; exact where the service law has a closed-form
/// Laplace transform, Monte Carlo over n draws otherwise. +inf when the
/// moment diverges (unstable signal with a heavy-tailed service law).
double mse_lower_bound(const ServiceModel& service, const OuParams& p, std::size_t n,
                       std::uint64_t seed);

/// First grid time at which the exact-transition gap path started at q
/// leaves (-v, v). Throws DomainError if |q| >= v, NonConvergence past
/// max_time.
double simulate_exit_time(double q, double v, const OuParams& p, double dt,
                          RandomStream& rng,
                          double max_time = std::numeric_limits<double>::infinity());

}  // namespace ousamp
