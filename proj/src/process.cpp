// SPDX-License-Identifier: Apache-2.0
#include "ousamp/process.hpp"

#include <cmath>
#include <sstream>

#include "ousamp/error.hpp"

namespace ousamp {

void OuParams::validate() const {
    if (!std::isfinite(theta) || !std::isfinite(mu))
        fail(ErrorCode::DomainError, "theta and mu must be finite");
    if (!(std::isfinite(sigma) && sigma > 0.0))
        fail(ErrorCode::DomainError, "sigma must be finite and positive");
}

double gap_variance(double y, const OuParams& p) {
    if (!(y >= 0.0)) fail(ErrorCode::DomainError, "gap_variance: negative elapsed time");
    const double s2 = p.sigma * p.sigma;
    if (p.is_wiener()) return s2 * y;
    return s2 * -std::expm1(-2.0 * p.theta * y) / (2.0 * p.theta);
}

TransitionCoeffs transition_coeffs(double dt, const OuParams& p) {
    if (!(dt >= 0.0)) fail(ErrorCode::DomainError, "transition: negative time step");
    if (p.is_wiener()) return {1.0, 0.0, p.sigma * std::sqrt(dt)};
    const double decay = std::exp(-p.theta * dt);
    return {decay, -p.mu * std::expm1(-p.theta * dt), std::sqrt(gap_variance(dt, p))};
}

double transition_sample(double x, double dt, const OuParams& p, RandomStream& rng) {
    if (!(dt >= 0.0)) fail(ErrorCode::DomainError, "transition_sample: negative time step");
    if (dt == 0.0) return x;
    const auto c = transition_coeffs(dt, p);
    return c.decay * x + c.shift + c.stddev * rng.normal();
}

GapSample sample_gap(double y, const OuParams& p, RandomStream& rng) {
    if (y == 0.0) return {0.0, 0.0};
    return {y, std::sqrt(gap_variance(y, p)) * rng.normal()};
}

double mse_lower_bound(const ServiceModel& service, const OuParams& p, std::size_t n,
                       std::uint64_t seed) {
    service.validate();
    const double s2 = p.sigma * p.sigma;
    if (p.is_wiener()) return s2 * service.mean();
    const double m = service_mgf_estimate(service, -2.0 * p.theta, n, seed);
    if (std::isinf(m)) return std::numeric_limits<double>::infinity();
    return p.stationary_scale() * (1.0 - m);
}

double simulate_exit_time(double q, double v, const OuParams& p, double dt, RandomStream& rng,
                          double max_time) {
    if (!(std::abs(q) < v)) {
        std::ostringstream os;
        os << "simulate_exit_time: start " << q << " is not inside (-" << v << ", " << v << ")";
        fail(ErrorCode::DomainError, os.str());
    }
    if (!(dt > 0.0)) fail(ErrorCode::DomainError, "simulate_exit_time: dt must be positive");
    // Gap process: mu = 0.
    const auto c = transition_coeffs(dt, OuParams{p.theta, 0.0, p.sigma});
    double o = q;
    std::uint64_t steps = 0;
    while (std::abs(o) < v) {
        o = c.decay * o + c.stddev * rng.normal();
        ++steps;
        if (static_cast<double>(steps) * dt > max_time)
            fail(ErrorCode::NonConvergence, "simulate_exit_time: exceeded max_time");
    }
    return static_cast<double>(steps) * dt;
}

}  // namespace ousamp
