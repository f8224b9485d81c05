// SPDX-License-Identifier: Apache-2.0
#include "ousamp/estimation.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "ousamp/error.hpp"

namespace ousamp {

double estimate(double t, const EstimatorState& state) {
    const OuParams& p = state.params;
    double q = state.x0;
    double s = 0.0;
    if (state.last_packet) {
        if (t < state.last_packet->d) {
            std::ostringstream os;
            os << "estimate requested at t=" << t << " before last delivery at "
               << state.last_packet->d;
            fail(ErrorCode::StaleState, os.str());
        }
        q = state.last_packet->q;
        s = state.last_packet->s;
    }
    if (p.is_wiener()) return q;
    const double tau = t - s;
    return q * std::exp(-p.theta * tau) - p.mu * std::expm1(-p.theta * tau);
}

void deliver(EstimatorState& state, const SamplePacket& packet) {
    if (state.last_packet && packet.d < state.last_packet->d)
        fail(ErrorCode::StaleState, "deliveries must be recorded in order");
    state.last_packet = packet;
}

double trapezoid_squared(std::span<const double> times, std::span<const double> values) {
    if (times.size() != values.size())
        fail(ErrorCode::DomainError, "trapezoid_squared: size mismatch");
    double acc = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k) {
        acc += 0.5 * (times[k] - times[k - 1]) *
               (values[k] * values[k] + values[k - 1] * values[k - 1]);
    }
    return acc;
}

double error_path_integral(std::span<const double> times, std::span<const double> signal,
                           const EstimatorState& state) {
    if (times.size() != signal.size())
        fail(ErrorCode::DomainError, "error_path_integral: size mismatch");
    std::vector<double> err(signal.size());
    for (std::size_t k = 0; k < signal.size(); ++k) err[k] = signal[k] - estimate(times[k], state);
    return trapezoid_squared(times, err);
}

}  // namespace ousamp
