// SPDX-License-Identifier: Apache-2.0
#include "ousamp/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/sinh_sinh.hpp>

#include "ousamp/error.hpp"

namespace ousamp {

double ServiceModel::mean() const noexcept {
    switch (kind) {
        case Kind::Constant: return p1;
        case Kind::Exponential: return p1;
        case Kind::Gamma: return p1 * p2;
        case Kind::LogNormalNormalized: return 1.0;
    }
    return 0.0;
}

void ServiceModel::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    const bool ok = kind == Kind::Gamma ? positive(p1) && positive(p2) : positive(p1);
    if (!ok) fail(ErrorCode::DomainError, "invalid service model: " + describe());
}

std::string ServiceModel::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Constant: os << "constant(" << p1 << ")"; break;
        case Kind::Exponential: os << "exponential(mean=" << p1 << ")"; break;
        case Kind::Gamma: os << "gamma(shape=" << p1 << ", scale=" << p2 << ")"; break;
        case Kind::LogNormalNormalized: os << "lognormal(alpha=" << p1 << ")"; break;
    }
    return os.str();
}

void NoiseModel::validate() const {
    if (!(std::isfinite(b1) && b1 >= 0.0 && std::isfinite(b2) && b2 >= 0.0))
        fail(ErrorCode::DomainError, "noise variances must be finite and non-negative");
}

double draw_service(const ServiceModel& service, RandomStream& rng) {
    switch (service.kind) {
        case ServiceModel::Kind::Constant:
            return service.p1;
        case ServiceModel::Kind::Exponential:
            return -service.p1 * std::log(rng.uniform());
        case ServiceModel::Kind::Gamma: {
            std::gamma_distribution<double> g(service.p1, service.p2);
            double y = g(rng.engine());
            // gamma_distribution can round to 0 for tiny shapes
            return y > 0.0 ? y : std::numeric_limits<double>::min();
        }
        case ServiceModel::Kind::LogNormalNormalized: {
            const double a = service.p1;
            return std::exp(a * rng.normal() - 0.5 * a * a);
        }
    }
    return service.p1;
}

double draw_noise(const NoiseModel& noise, RandomStream& rng) {
    double n = 0.0;
    if (noise.b1 > 0.0) n += std::sqrt(noise.b1) * rng.normal();
    if (noise.b2 > 0.0) n += std::sqrt(noise.b2) * rng.normal();
    return n;
}

double corrupt(double x, const NoiseModel& noise, RandomStream& rng) {
    if (noise.noiseless()) return x;
    return x + draw_noise(noise, rng);
}

std::optional<double> service_mgf(const ServiceModel& service, double s) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (service.kind) {
        case ServiceModel::Kind::Constant:
            return std::exp(s * service.p1);
        case ServiceModel::Kind::Exponential:
            if (s * service.p1 >= 1.0) return inf;
            return 1.0 / (1.0 - s * service.p1);
        case ServiceModel::Kind::Gamma:
            if (s * service.p2 >= 1.0) return inf;
            return std::pow(1.0 - s * service.p2, -service.p1);
        case ServiceModel::Kind::LogNormalNormalized: {
            if (s == 0.0) return 1.0;
            if (s > 0.0) return inf;  // log-normal laws have no exponential moments
            // E[exp(s Y)] over the standard normal driving Y = exp(a Z - a^2/2).
            const double a = service.p1;
            auto f = [a, s](double z) {
                return std::exp(-0.5 * z * z + s * std::exp(a * z - 0.5 * a * a));
            };
            boost::math::quadrature::sinh_sinh<double> integrator;
            return integrator.integrate(f, 1e-13) / std::sqrt(2.0 * std::numbers::pi);
        }
    }
    return std::nullopt;
}

double service_second_moment(const ServiceModel& service) noexcept {
    switch (service.kind) {
        case ServiceModel::Kind::Constant: return service.p1 * service.p1;
        case ServiceModel::Kind::Exponential: return 2.0 * service.p1 * service.p1;
        case ServiceModel::Kind::Gamma: return service.p1 * (service.p1 + 1.0) * service.p2 * service.p2;
        case ServiceModel::Kind::LogNormalNormalized: return std::exp(service.p1 * service.p1);
    }
    return 0.0;
}

double service_mgf_estimate(const ServiceModel& service, double s, std::size_t n,
                            std::uint64_t seed) {
    if (auto exact = service_mgf(service, s)) return *exact;
    if (n == 0) fail(ErrorCode::DomainError, "service_mgf_estimate: n must be positive");
    RandomStream rng(seed, 0, StreamPurpose::Scalar, 0x6d676600u);
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double add = std::exp(s * draw_service(service, rng));
        const double t = sum + add;
        comp += (std::abs(sum) >= std::abs(add)) ? (sum - t) + add : (add - t) + sum;
        sum = t;
    }
    return (sum + comp) / static_cast<double>(n);
}

FcfsChannel::FcfsChannel(double x0, double y0) {
    queue_.push_back(SamplePacket{0.0, x0, x0, y0, y0});
    last_delivery_ = y0;
}

SamplePacket FcfsChannel::submit(double s, double x, double q, double y) {
    if (s < last_submit_) {
        std::ostringstream os;
        os << "submission at t=" << s << " precedes previous submission at t=" << last_submit_;
        fail(ErrorCode::OrderViolation, os.str());
    }
    SamplePacket p{s, x, q, std::max(s, last_delivery_) + y, y};
    last_submit_ = s;
    last_delivery_ = p.d;
    queue_.push_back(p);
    return p;
}

bool FcfsChannel::idle(double t) const noexcept {
    return queue_.empty() || (queue_.size() == 1 && queue_.front().d <= t);
}

std::optional<SamplePacket> FcfsChannel::pop_delivered(double t) {
    if (queue_.empty() || queue_.front().d > t) return std::nullopt;
    SamplePacket p = queue_.front();
    queue_.pop_front();
    return p;
}

std::optional<double> FcfsChannel::next_delivery() const noexcept {
    if (queue_.empty()) return std::nullopt;
    return queue_.front().d;
}

}  // namespace ousamp
