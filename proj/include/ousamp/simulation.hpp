// SPDX-License-Identifier: Apache-2.0
#pragma once

// Path simulation of the sampler / channel / estimator loop.
//
// The simulator works in error coordinates: it tracks e_t = X_t - Xhat_t
// (noiseless estimate) and, for the packet in service, the gap since its
// sampling time. Both evolve with the exact OU transition driven by the same
// innovations, so unstable signals never overflow even though X_t does.
//
// Random numbers are drawn from per-sample streams (service time, noise,
// busy-period innovations, idle-period innovations of sample i), which keeps
// paths aligned across thresholds when only the policy changes.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ousamp/channel.hpp"
#include "ousamp/policy.hpp"
#include "ousamp/process.hpp"

namespace ousamp {

/// One delivery-to-delivery cycle [D_i, D_{i+1}).
struct CycleRecord {
    double duration = 0.0;
    double err_integral = 0.0;       // int (X - Xhat)^2 dt, noiseless samples
    double discount_integral = 0.0;  // int e^{-2 theta (t - S_i)} dt
    double noisy_err_integral = 0.0; // same path, estimator fed corrupted samples
    // Conditional Monte Carlo versions: the service period that closes the
    // cycle is replaced by its expectation given the error at the sampling
    // time. Same means as err_integral / duration, far smaller variance for
    // heavy-tailed service. Equal to the path values when unavailable.
    double err_integral_cmc = 0.0;
    double duration_cmc = 0.0;
    bool complete = true;            // false for a cycle cut off by a time horizon
};

/// For a service period of random length Y starting with error e:
/// E[int_0^Y (X - Xhat)^2 du] = e^2 m1 + m2.
struct BusyMoments {
    double m1 = 0.0;  // E[(1 - e^{-2 theta Y}) / (2 theta)], E[Y] at theta = 0
    double m2 = 0.0;  // E[int_0^Y gap_variance(u) du]
    double mean_service = 0.0;
};

/// nullopt when a required moment of the service law diverges.
std::optional<BusyMoments> busy_moments(const OuParams& params, const ServiceModel& service);

struct SimGrid {
    double dt_idle = 1e-3;  // threshold-detection step while the server is idle
    double dt_busy = 1e-2;  // integration step during service periods
};

/// Largest step with per-step standard deviation sigma sqrt(dt) <= v / 50.
double detection_step(double v, double sigma);

/// Busy-period step: 2% of min(E[Y], 1/|theta|).
double default_busy_step(const OuParams& params, const ServiceModel& service);

struct SimConfig {
    OuParams params;
    ServiceModel service;
    NoiseModel noise;
    PolicyKind policy;
    SimGrid grid;
    std::size_t warmup_cycles = 5;
    double max_cycle_duration = 0.0;  // 0 selects 1e4 * E[Y]
    std::optional<BusyMoments> busy;

    /// Fills grid and limits for `policy` following the detection rule,
    /// honouring an optional detection-step override.
    static SimConfig make(const OuParams& params, const ServiceModel& service,
                          const NoiseModel& noise, const PolicyKind& policy,
                          std::optional<double> dt_override = std::nullopt);
};

/// One sequential trajectory.
class TrajectorySimulator {
public:
    TrajectorySimulator(const SimConfig& config, std::uint64_t seed, std::uint64_t trajectory);

    /// Advances to the next delivery and returns the finished cycle. If
    /// `t_cap` is reached first, returns the truncated cycle (complete=false).
    CycleRecord next_cycle(double t_cap);

    double time() const noexcept { return t_; }
    std::uint64_t samples_taken() const noexcept { return sample_index_; }

private:
    void step(double dt, double decay, double stddev, double z);
    void take_sample();
    void run_busy(double t_cap);
    bool run_idle(double t_cap);
    CycleRecord close_cycle(bool complete);

    SimConfig cfg_;
    std::uint64_t seed_;
    std::uint64_t traj_;
    FcfsChannel channel_;

    double t_ = 0.0;
    double err_ = 0.0;        // noiseless estimation error
    double weight_ = 1.0;     // e^{-theta (t - S_ref)}
    double ref_noise_ = 0.0;  // noise on the sample the estimator is using
    double ref_sample_time_ = 0.0;
    double last_sample_time_ = 0.0;

    double gap_ = 0.0;          // gap of the packet in service since its sampling
    double pending_noise_ = 0.0;
    bool busy_ = true;

    double cycle_start_ = 0.0;
    double acc_err2_ = 0.0;     // int e^2
    double acc_err_w_ = 0.0;    // int e * weight
    double idle_err2_ = 0.0;    // int e^2 up to the sampling time
    double err_at_sample_ = 0.0;
    double sample_time_ = 0.0;
    bool sampled_ = false;      // a sample was sent in the current cycle

    std::uint64_t sample_index_ = 0;  // index of the packet in service / last sent
    std::uint64_t steps_ = 0;

    // constant-step coefficients
    TransitionCoeffs idle_c_{};
    TransitionCoeffs busy_c_{};
};

struct ParallelOptions {
    unsigned threads = 0;
    std::size_t cycles_per_trajectory = 500;
    std::size_t block = 50;  // cycles per batch for standard errors
};

/// n post-warm-up cycles from ceil(n / cycles_per_trajectory) independent
/// trajectories, concatenated in trajectory order.
std::vector<CycleRecord> run_cycles(const SimConfig& config, std::size_t n, std::uint64_t seed,
                                    const ParallelOptions& opt);

/// Post-warm-up cycles of `trajectories` runs, each observed for horizon /
/// trajectories time units after its warm-up. The last cycle of each run is
/// truncated at the horizon.
std::vector<CycleRecord> run_horizon(const SimConfig& config, double horizon,
                                     std::size_t trajectories, std::uint64_t seed,
                                     const ParallelOptions& opt);

}  // namespace ousamp
