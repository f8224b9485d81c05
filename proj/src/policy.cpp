// SPDX-License-Identifier: Apache-2.0
#include "ousamp/policy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ousamp/error.hpp"
#include "ousamp/specfun.hpp"

namespace ousamp {

PolicyKind PolicyKind::periodic(double period) {
    if (!(std::isfinite(period) && period > 0.0))
        fail(ErrorCode::DomainError, "periodic policy needs a positive period");
    return {Kind::Periodic, {}, period};
}

std::string PolicyKind::describe() const {
    std::ostringstream os;
    os.precision(10);
    switch (kind) {
        case Kind::OptimalThreshold:
            os << "threshold(v=" << threshold.v << ", beta=" << threshold.beta << ")";
            break;
        case Kind::ZeroWait: os << "zero_wait"; break;
        case Kind::Periodic: os << "periodic(T=" << period << ")"; break;
    }
    return os.str();
}

double threshold_v(double beta, const OuParams& params, double mse_y) {
    params.validate();
    auto domain = [&](const char* why) {
        std::ostringstream os;
        os.precision(17);
        os << "threshold_v: " << why << " (beta=" << beta << ", mse_y=" << mse_y
           << ", theta=" << params.theta << ")";
        fail(ErrorCode::DomainError, os.str());
    };
    if (!std::isfinite(mse_y) || !(mse_y >= 0.0)) domain("mse_y must be finite and non-negative");
    if (!(beta >= mse_y) || !std::isfinite(beta)) domain("beta below mse_y");
    if (beta == mse_y) return 0.0;

    const double sigma = params.sigma;
    switch (params.regime()) {
        case OuParams::Regime::Wiener:
            return std::sqrt(3.0 * (beta - mse_y));
        case OuParams::Regime::Stable: {
            const double s = params.stationary_scale();
            if (!(beta < s)) domain("beta must stay below sigma^2/(2 theta)");
            const double ratio = (s - mse_y) / (s - beta);
            return sigma / std::sqrt(params.theta) * specfun::g_inv(std::max(ratio, 1.0));
        }
        case OuParams::Regime::Unstable: {
            const double s = params.stationary_scale();
            const double ratio = (s - mse_y) / (s - beta);
            return sigma / std::sqrt(-params.theta) * specfun::k_inv(std::min(ratio, 1.0));
        }
    }
    return 0.0;
}

double next_periodic_tick(double last_sample, double period) {
    return (std::floor(last_sample / period) + 1.0) * period;
}

bool decide_sample(double t, double signal, double estimate, bool idle, const PolicyKind& policy,
                   double last_sample) {
    if (!idle) return false;
    switch (policy.kind) {
        case PolicyKind::Kind::OptimalThreshold:
            return std::abs(signal - estimate) >= policy.threshold.v;
        case PolicyKind::Kind::ZeroWait:
            return true;
        case PolicyKind::Kind::Periodic:
            return t >= next_periodic_tick(last_sample, policy.period);
    }
    return false;
}

}  // namespace ousamp
