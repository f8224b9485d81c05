// SPDX-License-Identifier: Apache-2.0
#pragma once

// Service-time laws, additive sample noise and the single-server FCFS
// channel with instantaneous acknowledgements.

#include <cstddef>
#include <deque>
#include <optional>
#include <string>

#include "ousamp/random.hpp"

namespace ousamp {

struct ServiceModel {
    enum class Kind { Constant, Exponential, Gamma, LogNormalNormalized };

    Kind kind = Kind::Constant;
    double p1 = 1.0;  // value | mean | shape | alpha
    double p2 = 0.0;  // gamma scale

    static ServiceModel constant(double value) { return {Kind::Constant, value, 0.0}; }
    static ServiceModel exponential(double mean) { return {Kind::Exponential, mean, 0.0}; }
    static ServiceModel gamma(double shape, double scale) { return {Kind::Gamma, shape, scale}; }
    /// Y = e^{alpha X} / E[e^{alpha X}] with X standard normal, so E[Y] = 1.
    static ServiceModel lognormal_normalized(double alpha) {
        return {Kind::LogNormalNormalized, alpha, 0.0};
    }

    double mean() const noexcept;
    /// Throws DomainError unless every parameter is finite and positive.
    void validate() const;
    std::string describe() const;
};

/// Zero-mean Gaussian sampler noise (variance b1) and channel noise (b2).
struct NoiseModel {
    double b1 = 0.0;
    double b2 = 0.0;

    bool noiseless() const noexcept { return b1 == 0.0 && b2 == 0.0; }
    /// E[(N + N')^2]; the two noises are independent with zero mean.
    double total_variance() const noexcept { return b1 + b2; }
    void validate() const;
};

struct SamplePacket {
    double s = 0.0;  // sampling time
    double x = 0.0;  // signal value at s
    double q = 0.0;  // value received by the estimator
    double d = 0.0;  // delivery time
    double y = 0.0;  // service time
};

double draw_service(const ServiceModel& service, RandomStream& rng);

/// N + N'.
double draw_noise(const NoiseModel& noise, RandomStream& rng);

/// x + N + N'; exactly x for the noiseless model.
double corrupt(double x, const NoiseModel& noise, RandomStream& rng);

/// E[e^{sY}] in closed form, or by quadrature for the log-normal law; +inf
/// when the moment diverges, nullopt when no deterministic evaluation exists.
std::optional<double> service_mgf(const ServiceModel& service, double s);

double service_second_moment(const ServiceModel& service) noexcept;

/// E[e^{sY}] from the closed form when available, otherwise from n draws.
double service_mgf_estimate(const ServiceModel& service, double s, std::size_t n,
                            std::uint64_t seed);

/// Single-server FIFO queue. Packets are delivered in submission order and
/// the sampler learns of every delivery immediately.
class FcfsChannel {
public:
    /// Starts with the initial packet S_0 = 0, D_0 = Y_0 in service.
    FcfsChannel(double x0, double y0);

    /// D = max(s, last delivery) + y. Throws OrderViolation if s decreases.
    SamplePacket submit(double s, double x, double q, double y);

    /// True when no packet is in service at time t.
    bool idle(double t) const noexcept;

    /// Removes and returns the oldest packet with delivery time <= t.
    std::optional<SamplePacket> pop_delivered(double t);

    std::optional<double> next_delivery() const noexcept;
    double last_delivery() const noexcept { return last_delivery_; }
    std::size_t in_flight() const noexcept { return queue_.size(); }

private:
    std::deque<SamplePacket> queue_;
    double last_submit_ = 0.0;
    double last_delivery_ = 0.0;
};

}  // namespace ousamp
