// SPDX-License-Identifier: Apache-2.0
#include "ousamp/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ousamp/error.hpp"
#include "ousamp/parallel.hpp"

namespace ousamp {

double detection_step(double v, double sigma) {
    const double r = v / (50.0 * sigma);
    return r * r;
}

double default_busy_step(const OuParams& params, const ServiceModel& service) {
    double scale = service.mean();
    if (!params.is_wiener()) scale = std::min(scale, 1.0 / std::abs(params.theta));
    return 0.02 * scale;
}

std::optional<BusyMoments> busy_moments(const OuParams& params, const ServiceModel& service) {
    BusyMoments b;
    b.mean_service = service.mean();
    const double s2 = params.sigma * params.sigma;
    if (params.is_wiener()) {
        b.m1 = b.mean_service;
        b.m2 = 0.5 * s2 * service_second_moment(service);
        return b;
    }
    const auto mgf = service_mgf(service, -2.0 * params.theta);
    if (!mgf || !std::isfinite(*mgf)) return std::nullopt;
    const double two_theta = 2.0 * params.theta;
    b.m1 = (1.0 - *mgf) / two_theta;
    b.m2 = s2 / two_theta * (b.mean_service - b.m1);
    return b;
}

SimConfig SimConfig::make(const OuParams& params, const ServiceModel& service,
                          const NoiseModel& noise, const PolicyKind& policy,
                          std::optional<double> dt_override) {
    params.validate();
    service.validate();
    noise.validate();
    SimConfig cfg;
    cfg.params = params;
    cfg.service = service;
    cfg.noise = noise;
    cfg.policy = policy;
    cfg.grid.dt_busy = default_busy_step(params, service);
    cfg.grid.dt_idle = cfg.grid.dt_busy;
    if (policy.kind == PolicyKind::Kind::OptimalThreshold && policy.threshold.v > 0.0)
        cfg.grid.dt_idle = std::min(cfg.grid.dt_busy, detection_step(policy.threshold.v, params.sigma));
    if (dt_override) {
        if (!(*dt_override > 0.0)) fail(ErrorCode::DomainError, "dt override must be positive");
        cfg.grid.dt_idle = *dt_override;
    }
    cfg.max_cycle_duration = 1e4 * service.mean();
    cfg.busy = busy_moments(params, service);
    return cfg;
}

namespace {

OuParams gap_params(const OuParams& p) { return {p.theta, 0.0, p.sigma}; }

}  // namespace

TrajectorySimulator::TrajectorySimulator(const SimConfig& config, std::uint64_t seed,
                                         std::uint64_t trajectory)
    : cfg_(config),
      seed_(seed),
      traj_(trajectory),
      channel_(0.0, [&] {
          RandomStream rs(seed, trajectory, StreamPurpose::Service, 0);
          return draw_service(config.service, rs);
      }()) {
    if (cfg_.max_cycle_duration <= 0.0) cfg_.max_cycle_duration = 1e4 * cfg_.service.mean();
    idle_c_ = transition_coeffs(cfg_.grid.dt_idle, gap_params(cfg_.params));
    busy_c_ = transition_coeffs(cfg_.grid.dt_busy, gap_params(cfg_.params));
    if (!cfg_.noise.noiseless()) {
        RandomStream rs(seed_, traj_, StreamPurpose::Noise, 0);
        pending_noise_ = draw_noise(cfg_.noise, rs);
    }
    // Initial packet S_0 = 0, D_0 = Y_0; before D_0 the estimate is the prior
    // mean from X_0, so the error equals the gap since t = 0.
    constexpr double inf = std::numeric_limits<double>::infinity();
    run_busy(inf);
    close_cycle(true);
    for (std::size_t k = 0; k < cfg_.warmup_cycles; ++k) next_cycle(inf);
}

void TrajectorySimulator::step(double dt, double decay, double stddev, double z) {
    const double e0 = err_;
    const double w0 = weight_;
    const double dz = stddev * z;
    err_ = decay * err_ + dz;
    gap_ = decay * gap_ + dz;
    weight_ *= decay;
    acc_err2_ += 0.5 * dt * (e0 * e0 + err_ * err_);
    acc_err_w_ += 0.5 * dt * (e0 * w0 + err_ * weight_);
    t_ += dt;
}

void TrajectorySimulator::take_sample() {
    ++sample_index_;
    const auto idx = static_cast<std::uint32_t>(sample_index_);
    RandomStream srv(seed_, traj_, StreamPurpose::Service, idx);
    const double y = draw_service(cfg_.service, srv);
    double n = 0.0;
    if (!cfg_.noise.noiseless()) {
        RandomStream nz(seed_, traj_, StreamPurpose::Noise, idx);
        n = draw_noise(cfg_.noise, nz);
    }
    idle_err2_ = acc_err2_;
    err_at_sample_ = err_;
    sample_time_ = t_;
    sampled_ = true;
    // Error coordinates: the packet carries the signal relative to itself.
    channel_.submit(t_, 0.0, n, y);
    gap_ = 0.0;
    pending_noise_ = n;
    last_sample_time_ = t_;
    busy_ = true;
}

void TrajectorySimulator::run_busy(double t_cap) {
    const double d = *channel_.next_delivery();
    RandomStream rs(seed_, traj_, StreamPurpose::SignalBusy, static_cast<std::uint32_t>(sample_index_));
    const double h = cfg_.grid.dt_busy;
    while (t_ < d) {
        const double remaining = d - t_;
        const double target = std::min(d, t_cap);
        if (remaining > h && t_ + h <= target) {
            step(h, busy_c_.decay, busy_c_.stddev, rs.normal());
            continue;
        }
        const double dt = target - t_;
        if (dt > 0.0) {
            const auto c = transition_coeffs(dt, gap_params(cfg_.params));
            step(dt, c.decay, c.stddev, rs.normal());
        }
        t_ = target;
        return;
    }
}

bool TrajectorySimulator::run_idle(double t_cap) {
    const PolicyKind& pol = cfg_.policy;
    switch (pol.kind) {
        case PolicyKind::Kind::ZeroWait:
            return true;
        case PolicyKind::Kind::OptimalThreshold: {
            const double v = pol.threshold.v;
            if (std::abs(err_) >= v) return true;
            RandomStream rs(seed_, traj_, StreamPurpose::SignalIdle,
                            static_cast<std::uint32_t>(sample_index_));
            const double h = cfg_.grid.dt_idle;
            const double limit = cycle_start_ + cfg_.max_cycle_duration;
            for (;;) {
                if (t_ + h > t_cap) {
                    const double dt = t_cap - t_;
                    if (dt > 0.0) {
                        const auto c = transition_coeffs(dt, gap_params(cfg_.params));
                        step(dt, c.decay, c.stddev, rs.normal());
                    }
                    t_ = t_cap;
                    return false;
                }
                step(h, idle_c_.decay, idle_c_.stddev, rs.normal());
                if (std::abs(err_) >= v) return true;
                if (t_ > limit) {
                    std::ostringstream os;
                    os << "cycle exceeded max duration " << cfg_.max_cycle_duration
                       << " under " << pol.describe();
                    fail(ErrorCode::NonConvergence, os.str());
                }
            }
        }
        case PolicyKind::Kind::Periodic: {
            const double tick = next_periodic_tick(last_sample_time_, pol.period);
            if (t_ >= tick) return true;
            RandomStream rs(seed_, traj_, StreamPurpose::SignalIdle,
                            static_cast<std::uint32_t>(sample_index_));
            const double h = cfg_.grid.dt_busy;
            const double target = std::min(tick, t_cap);
            while (t_ < target) {
                if (target - t_ > h) {
                    step(h, busy_c_.decay, busy_c_.stddev, rs.normal());
                } else {
                    const auto c = transition_coeffs(target - t_, gap_params(cfg_.params));
                    step(target - t_, c.decay, c.stddev, rs.normal());
                    t_ = target;
                }
            }
            return t_ >= tick;
        }
    }
    return true;
}

CycleRecord TrajectorySimulator::close_cycle(bool complete) {
    CycleRecord rec;
    rec.complete = complete;
    rec.duration = t_ - cycle_start_;
    rec.err_integral = acc_err2_;
    const OuParams& p = cfg_.params;
    if (p.is_wiener()) {
        rec.discount_integral = rec.duration;
    } else {
        const double lead = std::exp(-2.0 * p.theta * (cycle_start_ - ref_sample_time_));
        rec.discount_integral = lead * -std::expm1(-2.0 * p.theta * rec.duration) / (2.0 * p.theta);
    }
    rec.noisy_err_integral = acc_err2_ - 2.0 * ref_noise_ * acc_err_w_ +
                             ref_noise_ * ref_noise_ * rec.discount_integral;
    if (complete && sampled_ && cfg_.busy) {
        const auto& b = *cfg_.busy;
        rec.err_integral_cmc = idle_err2_ + err_at_sample_ * err_at_sample_ * b.m1 + b.m2;
        rec.duration_cmc = (sample_time_ - cycle_start_) + b.mean_service;
    } else {
        rec.err_integral_cmc = rec.err_integral;
        rec.duration_cmc = rec.duration;
    }

    if (complete) {
        // Delivery of the packet in service: the estimator switches to it.
        const auto pkt = channel_.pop_delivered(t_);
        err_ = gap_;
        ref_noise_ = pending_noise_;
        ref_sample_time_ = pkt ? pkt->s : ref_sample_time_;
        weight_ = p.is_wiener() ? 1.0 : std::exp(-p.theta * (t_ - ref_sample_time_));
        busy_ = false;
    }
    acc_err2_ = 0.0;
    acc_err_w_ = 0.0;
    sampled_ = false;
    cycle_start_ = t_;
    return rec;
}

CycleRecord TrajectorySimulator::next_cycle(double t_cap) {
    if (!run_idle(t_cap)) return close_cycle(false);
    take_sample();
    run_busy(t_cap);
    if (t_ < *channel_.next_delivery()) return close_cycle(false);
    return close_cycle(true);
}

std::vector<CycleRecord> run_cycles(const SimConfig& config, std::size_t n, std::uint64_t seed,
                                    const ParallelOptions& opt) {
    if (n == 0) fail(ErrorCode::DomainError, "run_cycles: n must be positive");
    const std::size_t per = std::max<std::size_t>(1, opt.cycles_per_trajectory);
    const std::size_t m = (n + per - 1) / per;
    std::vector<std::vector<CycleRecord>> parts(m);
    parallel_for(m, opt.threads, [&](std::size_t k) {
        const std::size_t count = (k + 1 < m) ? per : n - per * (m - 1);
        TrajectorySimulator sim(config, seed, k);
        parts[k].reserve(count);
        constexpr double inf = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < count; ++j) parts[k].push_back(sim.next_cycle(inf));
    });
    std::vector<CycleRecord> out;
    out.reserve(n);
    for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
    return out;
}

std::vector<CycleRecord> run_horizon(const SimConfig& config, double horizon,
                                     std::size_t trajectories, std::uint64_t seed,
                                     const ParallelOptions& opt) {
    if (!(horizon > 0.0) || trajectories == 0)
        fail(ErrorCode::DomainError, "run_horizon: horizon and trajectory count must be positive");
    const double span = horizon / static_cast<double>(trajectories);
    std::vector<std::vector<CycleRecord>> parts(trajectories);
    parallel_for(trajectories, opt.threads, [&](std::size_t k) {
        TrajectorySimulator sim(config, seed, k);
        const double t_end = sim.time() + span;
        for (;;) {
            CycleRecord rec = sim.next_cycle(t_end);
            parts[k].push_back(rec);
            if (!rec.complete || sim.time() >= t_end) break;
        }
    });
    std::vector<CycleRecord> out;
    for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
    return out;
}

}  // namespace ousamp
