// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ousamp/error.hpp"
#include "ousamp/estimation.hpp"

using namespace ousamp;

TEST_SUITE("estimation") {

TEST_CASE("estimator formula") {
    EstimatorState st{{0.5, 2.0, 1.0}, 0.0, SamplePacket{0.0, 4.0, 4.0, 0.2, 0.2}};
    CHECK(estimate(1.0, st) == doctest::Approx(3.2131).epsilon(1e-4));
    CHECK(estimate(1.0, st) ==
          doctest::Approx(4 * std::exp(-0.5) + 2 * (1 - std::exp(-0.5))).epsilon(1e-15));
    st.last_packet->d = 0.0;
    CHECK(estimate(0.0, st) == 4.0);
    EstimatorState fast{{50.0, 2.0, 1.0}, 0.0, SamplePacket{0.0, 4.0, 4.0, 0.0, 0.0}};
    CHECK(std::abs(estimate(1.0, fast) - 2.0) <= 2e-20 * 4.0 + 1e-15);
    EstimatorState w{{0.0, 0.0, 1.0}, 0.0, SamplePacket{1.0, 3.0, 2.5, 2.0, 1.0}};
    CHECK(estimate(10.0, w) == 2.5);
    CHECK_THROWS_AS(estimate(1.5, w), Error);
    EstimatorState prior{{0.5, 1.0, 1.0}, 3.0, std::nullopt};
    CHECK(estimate(2.0, prior) == doctest::Approx(3 * std::exp(-1.0) + (1 - std::exp(-1.0))));
    CHECK_THROWS_AS(deliver(w, SamplePacket{0.5, 0, 0, 1.5, 1.0}), Error);
}

TEST_CASE("error path integral") {
    const EstimatorState st{{0.0, 0.0, 1.0}, 0.0, SamplePacket{0.0, 1.0, 1.0, 0.0, 0.0}};
    const std::vector<double> t{0.0, 0.5, 1.0, 2.0};
    const std::vector<double> same{1.0, 1.0, 1.0, 1.0};
    CHECK(error_path_integral(t, same, st) == 0.0);
    const std::vector<double> off{1.5, 1.5, 1.5, 1.5};
    CHECK(error_path_integral(t, off, st) == 0.25 * 2.0);
    const std::vector<double> bad{1.0};
    CHECK_THROWS_AS(error_path_integral(t, bad, st), Error);
}

TEST_CASE("conditional error law after delivery") {
    // Noiseless: X_t - Xhat_t at lag u after the sampling time is O_u.
    const OuParams p{0.5, 1.0, 1.2};
    const double y = 0.7, u = 1.3;
    const std::size_t n = 200000;
    RandomStream rs(1, 0, StreamPurpose::Test);
    double s = 0, s2 = 0, s4 = 0;
    std::vector<double> errs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xs = transition_sample(p.mu, 10.0, p, rs);
        EstimatorState st{p, 0.0, std::nullopt};
        deliver(st, SamplePacket{0.0, xs, xs, y, y});
        const double xt = transition_sample(xs, u, p, rs);
        errs[i] = xt - estimate(u, st);
        s += errs[i];
    }
    const double mean = s / n;
    for (double e : errs) {
        s2 += (e - mean) * (e - mean);
        s4 += std::pow(e - mean, 4);
    }
    const double var = s2 / n;
    const double se = std::sqrt((s4 / n - var * var) / n);
    CHECK(std::abs(var - gap_variance(u, p)) <= 4 * se);
    CHECK(std::abs(mean) <= 4 * std::sqrt(var / n));
}

TEST_CASE("noisy error decomposition") {
    // With noise the error is O_u - (N + N') e^{-theta u}; the cross term
    // O_u (N + N') has zero mean.
    const OuParams p{0.5, 0.0, 1.0};
    const NoiseModel nm{0.1, 0.1};
    const double u = 0.9;
    const std::size_t n = 200000;
    RandomStream rs(2, 0, StreamPurpose::Test);
    double sc = 0, sc2 = 0, se2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xs = transition_sample(0.0, 10.0, p, rs);
        const double q = corrupt(xs, nm, rs);
        EstimatorState st{p, 0.0, SamplePacket{0.0, xs, q, 0.0, 0.0}};
        const double xt = transition_sample(xs, u, p, rs);
        const double o = xt - xs * std::exp(-p.theta * u);
        const double noise_part = (q - xs) * std::exp(-p.theta * u);
        const double e = xt - estimate(u, st);
        CHECK(e == doctest::Approx(o - noise_part).epsilon(1e-9).scale(1.0));
        const double cross = o * noise_part;
        sc += cross;
        sc2 += cross * cross;
        se2 += e * e;
    }
    const double mc = sc / n;
    CHECK(std::abs(mc) <= 3 * std::sqrt((sc2 / n - mc * mc) / n));
    const double expect = gap_variance(u, p) + nm.total_variance() * std::exp(-2 * p.theta * u);
    CHECK(se2 / n == doctest::Approx(expect).epsilon(0.01));
}

}  // TEST_SUITE
