// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "ousamp/error.hpp"
#include "ousamp/policy.hpp"
#include "ousamp/specfun.hpp"

using namespace ousamp;

TEST_SUITE("policy") {

TEST_CASE("degenerate threshold") {
    for (double theta : {-0.5, 0.0, 0.5}) CHECK(threshold_v(0.7, {theta, 0, 1}, 0.7) == 0.0);
}

TEST_CASE("closed-form thresholds") {
    CHECK(threshold_v(4.0 / 3.0, {0.0, 0, 1}, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    const double mse_y = 1 - std::exp(-1.0);
    const double ratio = (1 - mse_y) / (1 - 0.8);
    CHECK(ratio == doctest::Approx(1.8394).epsilon(1e-4));
    CHECK(threshold_v(0.8, {0.5, 0, 1}, mse_y) ==
          doctest::Approx(std::sqrt(2.0) * specfun::g_inv(ratio)).epsilon(1e-14));
    const OuParams u{-0.5, 0, 1};
    const double my = std::exp(1.0) - 1;
    const double s = -1.0;
    CHECK(threshold_v(2.0, u, my) ==
          doctest::Approx(std::sqrt(2.0) * specfun::k_inv((s - my) / (s - 2.0))).epsilon(1e-14));
    // Scale: v grows with sigma, beta and mse_y scale with sigma^2.
    CHECK(threshold_v(4.0 * 0.8, {0.5, 0, 2}, 4.0 * mse_y) ==
          doctest::Approx(2.0 * threshold_v(0.8, {0.5, 0, 1}, mse_y)).epsilon(1e-12));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(threshold_v(0.5, {0.5, 0, 1}, 0.6), Error);
    CHECK_THROWS_AS(threshold_v(1.0, {0.5, 0, 1}, 0.6), Error);
    CHECK_THROWS_AS(threshold_v(1.0, {0.5, 0, 1}, INFINITY), Error);
}

TEST_CASE("monotone and continuous in beta") {
    for (double theta : {-0.5, 0.0, 0.5}) {
        const OuParams p{theta, 0, 1};
        const double my = 0.5;
        double prev = 0.0;
        const double top = theta > 0 ? 0.99 : 5.0;
        for (double b = my + 1e-3; b < top; b += 1e-3) {
            const double v = threshold_v(b, p, my);
            CHECK(v > prev);
            CHECK(v - prev < 0.1);
            prev = v;
        }
    }
}

TEST_CASE("regime continuity at theta = 0") {
    for (double d : {0.1, 0.5, 2.0}) {
        const double v0 = threshold_v(1.0 + d, {0.0, 0, 1}, 1.0);
        for (double theta : {-1e-6, 1e-6}) {
            const double my = (1 - std::exp(-2 * theta)) / (2 * theta);
            CHECK(threshold_v(my + d, {theta, 0, 1}, my) == doctest::Approx(v0).epsilon(1e-3));
        }
    }
}

TEST_CASE("sampling decisions") {
    const auto zero = PolicyKind::optimal_threshold({0.6, 0.0});
    CHECK(decide_sample(0, 0.0, 0.0, true, zero));
    const auto thr = PolicyKind::optimal_threshold({0.8, 1.0});
    CHECK(decide_sample(0, 1.0, 0.0, true, thr));
    CHECK(decide_sample(0, -1.0, 0.0, true, thr));
    CHECK_FALSE(decide_sample(0, 0.999, 0.0, true, thr));
    CHECK_FALSE(decide_sample(0, 5.0, 0.0, false, thr));
    CHECK(decide_sample(0, 0, 0, true, PolicyKind::zero_wait()));
    CHECK_FALSE(decide_sample(0, 0, 0, false, PolicyKind::zero_wait()));
    const auto per = PolicyKind::periodic(0.5);
    CHECK_FALSE(decide_sample(0.49, 0, 0, true, per, 0.0));
    CHECK(decide_sample(0.5, 0, 0, true, per, 0.0));
    CHECK_FALSE(decide_sample(0.6, 0, 0, false, per, 0.0));
    CHECK(next_periodic_tick(0.5, 0.5) == 1.0);
    CHECK(next_periodic_tick(0.7, 0.5) == 1.0);
    CHECK_THROWS_AS(PolicyKind::periodic(0.0), Error);
}

}  // TEST_SUITE
