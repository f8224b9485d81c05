// SPDX-License-Identifier: Apache-2.0
#include "ousamp/eval.hpp"

#include <algorithm>
#include <cmath>

#include "ousamp/error.hpp"
#include "ousamp/parallel.hpp"
#include "ousamp/random.hpp"
#include "ousamp/specfun.hpp"

namespace ousamp {

LongRunResult long_run_mse(const PolicyKind& policy, const OuParams& params,
                           const ServiceModel& service, const NoiseModel& noise, double horizon,
                           std::uint64_t seed, const EvalOptions& options) {
    if (!(horizon > 0.0)) fail(ErrorCode::DomainError, "horizon must be positive");
    noise.validate();
    const auto cfg = SimConfig::make(params, service, noise, policy, options.dt_override);
    const auto cycles =
        run_horizon(cfg, horizon, std::max<std::size_t>(options.trajectories, 1), seed, options.parallel);
    std::size_t complete = 0;
    for (const auto& c : cycles) complete += c.complete ? 1 : 0;
    if (complete < options.min_cycles) {
        fail(ErrorCode::DomainError, "horizon " + std::to_string(horizon) + " covers only " +
                                         std::to_string(complete) + " deliveries (need " +
                                         std::to_string(options.min_cycles) + ")");
    }
    std::vector<double> dur(cycles.size()), err(cycles.size()), noisy(cycles.size()),
        gap(cycles.size());
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        dur[i] = cycles[i].duration;
        err[i] = cycles[i].err_integral;
        noisy[i] = cycles[i].noisy_err_integral;
        gap[i] = noisy[i] - err[i];
    }
    LongRunResult r;
    const std::size_t b = options.parallel.block;
    r.mse = stats::ratio_jackknife(err, dur, b);
    r.mse_noisy = stats::ratio_jackknife(noisy, dur, b);
    r.noise_gap = stats::ratio_jackknife(gap, dur, b);
    r.observed_time = stats::pairwise_sum(dur);
    r.cycles = complete;
    return r;
}

stats::Estimate discount_integral_mean(double v, const OuParams& params,
                                       const ServiceModel& service, std::size_t n,
                                       std::uint64_t seed, const ParallelOptions& opt) {
    params.validate();
    service.validate();
    if (params.regime() != OuParams::Regime::Stable)
        fail(ErrorCode::DomainError, "the scalar discount formula requires theta > 0");
    if (!(v >= 0.0) || !std::isfinite(v)) fail(ErrorCode::DomainError, "threshold must be finite and >= 0");
    if (n == 0) fail(ErrorCode::DomainError, "need at least one draw");

    const double th = params.theta;
    const double s2 = params.sigma * params.sigma;
    // E[e^{-2 theta Y'}] for the service time of the next sample.
    const double m = service_mgf_estimate(service, -2.0 * th, 1000000, hash_combine(seed, 0x6d));
    const double zv = th * v * v / s2;

    constexpr std::size_t kChunk = 4096;
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> values(n);
    parallel_for(chunks, opt.threads, [&](std::size_t c) {
        RandomStream rng(seed, c, StreamPurpose::Scalar, 0x64697363);
        const std::size_t end = std::min(n, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
            const double y = draw_service(service, rng);
            const auto o = sample_gap(y, params, rng);
            double frac = 1.0;  // fraction of E[e^{-2 theta Y'}] discounted away
            if (std::abs(o.value) < v) {
                const double zq = th * o.value * o.value / s2;
                frac = std::min(1.0, specfun::kummer_1f1_1_half_ratio(zq, zv));
            }
            values[i] = std::exp(-2.0 * th * y) * (1.0 - frac * m) / (2.0 * th);
        }
    });
    return stats::mean_blocks(values, 1000);
}

MseReport mse_upper_bound(const PolicySolution& sol, const OuParams& params,
                          const ServiceModel& service, const NoiseModel& noise,
                          std::uint64_t seed, const BoundOptions& options) {
    noise.validate();
    MseReport rep;
    rep.mse_lower = sol.mse_y;
    const auto policy = PolicyKind::optimal_threshold({sol.beta, sol.v});
    const std::optional<double> dt =
        options.eval.dt_override ? options.eval.dt_override
                                 : (sol.dt_idle > 0.0 ? std::optional<double>(sol.dt_idle) : std::nullopt);

    // Noiseless cycles; the noisy path shares the sampling times, so the same
    // run also yields the simulated discount integral.
    const auto cfg = SimConfig::make(params, service, noise, policy, dt);
    const auto cycles = run_cycles(cfg, options.cycles, hash_combine(seed, 0x51), options.eval.parallel);
    const std::size_t b = options.eval.parallel.block;
    std::vector<double> dur(cycles.size()), err_c(cycles.size()), dur_c(cycles.size()),
        disc(cycles.size());
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        dur[i] = cycles[i].duration;
        err_c[i] = cycles[i].err_integral_cmc;
        dur_c[i] = cycles[i].duration_cmc;
        disc[i] = cycles[i].discount_integral;
    }
    const auto mse0 = stats::ratio_jackknife(err_c, dur_c, b);
    const auto edur = stats::mean_blocks(dur_c, b);
    rep.mse_no_noise = mse0.value;
    rep.ci_mse_no_noise = stats::ci95(mse0.std_error);
    rep.mean_duration = edur.value;

    const double bsum = noise.total_variance();
    if (params.regime() == OuParams::Regime::Stable) {
        const auto d = discount_integral_mean(sol.v, params, service, options.discount_draws,
                                              hash_combine(seed, 0x52), options.eval.parallel);
        rep.noise_term = bsum * d.value / edur.value;
        const double rel = std::hypot(d.std_error / d.value, edur.std_error / edur.value);
        rep.ci_noise_term = stats::ci95(rep.noise_term * rel);
        rep.noise_term_analytic = true;
    } else {
        const auto d = stats::ratio_jackknife(disc, dur, b);
        rep.noise_term = bsum * d.value;
        rep.ci_noise_term = stats::ci95(bsum * d.std_error);
        rep.noise_term_analytic = false;
    }
    rep.mse_upper_formula = rep.mse_no_noise + rep.noise_term;
    rep.ci_mse_upper_formula = std::hypot(rep.ci_mse_no_noise, rep.ci_noise_term);

    EvalOptions lr = options.eval;
    lr.dt_override = dt;
    lr.min_cycles = std::min<std::size_t>(lr.min_cycles, options.long_run_cycles / 2);
    const double horizon = static_cast<double>(options.long_run_cycles) * edur.value;
    const auto noisy = long_run_mse(policy, params, service, noise, horizon, hash_combine(seed, 0x53), lr);
    rep.mse_with_noise_sim = noisy.mse_noisy.value;
    rep.ci_mse_with_noise_sim = stats::ci95(noisy.mse_noisy.std_error);
    return rep;
}

}  // namespace ousamp
