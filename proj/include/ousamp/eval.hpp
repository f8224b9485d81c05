// SPDX-License-Identifier: Apache-2.0
#pragma once

// Long-run MSE estimation and the noisy-sample upper bound.

#include <cstddef>
#include <cstdint>
#include <optional>

#include "ousamp/simulation.hpp"
#include "ousamp/solver.hpp"
#include "ousamp/stats.hpp"

namespace ousamp {

struct EvalOptions {
    ParallelOptions parallel;
    std::size_t trajectories = 32;
    std::optional<double> dt_override;
    std::size_t min_cycles = 1000;
};

struct LongRunResult {
    stats::Estimate mse;        // noiseless samples
    stats::Estimate mse_noisy;  // same path, corrupted samples
    stats::Estimate noise_gap;  // mse_noisy - mse on the common path
    double observed_time = 0.0;
    std::size_t cycles = 0;
};

/// Time-average squared error over `horizon` time units (split across
/// independent trajectories). Throws DomainError if fewer than
/// options.min_cycles deliveries fall inside the horizon.
LongRunResult long_run_mse(const PolicyKind& policy, const OuParams& params,
                           const ServiceModel& service, const NoiseModel& noise, double horizon,
                           std::uint64_t seed, const EvalOptions& options = {});

/// Per-cycle mean of int_{D_i}^{D_{i+1}} e^{-2 theta (t - S_i)} dt under the
/// threshold policy with threshold v, from scalar draws of (Y, O_Y). Requires
/// theta > 0.
stats::Estimate discount_integral_mean(double v, const OuParams& params,
                                       const ServiceModel& service, std::size_t n,
                                       std::uint64_t seed, const ParallelOptions& opt = {});

struct MseReport {
    double mse_lower = 0.0;
    double mse_no_noise = 0.0;
    double mse_with_noise_sim = 0.0;
    double mse_upper_formula = 0.0;
    double noise_term = 0.0;
    double mean_duration = 0.0;
    double ci_mse_no_noise = 0.0;
    double ci_mse_with_noise_sim = 0.0;
    double ci_mse_upper_formula = 0.0;
    double ci_noise_term = 0.0;
    bool noise_term_analytic = true;  // false: path-simulated discount integral
};

struct BoundOptions {
    std::size_t cycles = 20000;          // noiseless cycle run at v
    std::size_t discount_draws = 200000; // scalar draws for the discount integral
    std::size_t long_run_cycles = 20000; // approximate cycle count of the noisy long run
    EvalOptions eval;
};

/// Evaluates the solved threshold policy with and without measurement noise
/// and the additive upper bound mse_no_noise + (b1 + b2) E[discount] / E[D].
MseReport mse_upper_bound(const PolicySolution& solution, const OuParams& params,
                          const ServiceModel& service, const NoiseModel& noise,
                          std::uint64_t seed, const BoundOptions& options = {});

}  // namespace ousamp
