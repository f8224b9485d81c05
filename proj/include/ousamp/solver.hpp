// SPDX-License-Identifier: Apache-2.0
#pragma once

// Root finding for the optimal-cost parameter beta:
//   E[int_{D_i}^{D_{i+1}} (X - Xhat)^2 dt] - beta E[D_{i+1} - D_i] = 0
// under the threshold policy v(beta), by bisection on simulated cycles.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ousamp/simulation.hpp"
#include "ousamp/stats.hpp"

namespace ousamp {

struct SolverOptions {
    double tol_rel = 1e-3;
    double tol_abs = 1e-9;
    std::size_t pilot_cycles = 2000;       // per residual evaluation, pilot stage
    std::size_t search_cycles = 20000;     // per residual evaluation, common-random-number stage
    std::size_t validation_cycles = 20000; // fresh-seed re-validation
    std::size_t mse_y_draws = 1000000;
    std::optional<double> dt_override;
    ParallelOptions parallel;
    int max_doublings = 60;
    int max_iterations = 100;
};

/// One residual evaluation on the search path.
struct ResidualEval {
    std::string stage;  // "pilot", "search" or "validation"
    double beta = 0.0;
    double v = 0.0;
    double residual = 0.0;
    double residual_se = 0.0;
    double ratio = 0.0;     // mean(err_integral) / mean(duration)
    double ratio_se = 0.0;
    double mean_duration = 0.0;
};

struct PolicySolution {
    double beta = 0.0;
    double v = 0.0;
    std::size_t n_cycles = 0;  // cycles simulated in total
    double residual = 0.0;     // left side of the root equation at beta
    double ci_halfwidth = 0.0; // 95% half-width of the validated cost estimate

    // diagnostics
    double mse_y = 0.0;
    double dt_idle = 0.0;
    double pilot_beta = 0.0;
    double validation_ratio = 0.0;
    double validation_ratio_se = 0.0;
    double validation_residual = 0.0;
    double validation_residual_se = 0.0;
    double mean_duration = 0.0;
    int doublings = 0;
    bool doublings_flagged = false;  // more than 20 bracket doublings
    std::vector<ResidualEval> history;
};

/// Noiseless cycles under `policy`, warm-up discarded.
std::vector<CycleRecord> simulate_cycles(const PolicyKind& policy, const OuParams& params,
                                         const ServiceModel& service, std::size_t n,
                                         std::uint64_t seed, const ParallelOptions& opt = {},
                                         std::optional<double> dt_override = std::nullopt);

/// mean(err_integral) - beta * mean(duration) over the conditional Monte
/// Carlo fields, jackknife standard error over blocks of `block` cycles.
stats::Estimate beta_residual(double beta, std::span<const CycleRecord> cycles,
                              std::size_t block = 50);

/// Cycle-ratio cost estimate mean(err_integral) / mean(duration), conditional
/// Monte Carlo fields.
stats::Estimate cycle_ratio(std::span<const CycleRecord> cycles, std::size_t block = 50);

PolicySolution solve_beta(const OuParams& params, const ServiceModel& service,
                          const SolverOptions& options, std::uint64_t seed);

}  // namespace ousamp
