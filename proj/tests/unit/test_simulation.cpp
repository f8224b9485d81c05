// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ousamp/error.hpp"
#include "ousamp/simulation.hpp"
#include "ousamp/stats.hpp"

using namespace ousamp;

namespace {

stats::Estimate path_ratio(const std::vector<CycleRecord>& c) {
    std::vector<double> e, d;
    for (const auto& r : c) {
        e.push_back(r.err_integral);
        d.push_back(r.duration);
    }
    return stats::ratio_jackknife(e, d, 50);
}

stats::Estimate cmc_ratio(const std::vector<CycleRecord>& c) {
    std::vector<double> e, d;
    for (const auto& r : c) {
        e.push_back(r.err_integral_cmc);
        d.push_back(r.duration_cmc);
    }
    return stats::ratio_jackknife(e, d, 50);
}

}  // namespace

TEST_SUITE("simulation") {

TEST_CASE("detection and busy steps") {
    CHECK(detection_step(1.0, 1.0) == doctest::Approx(4e-4));
    CHECK(std::sqrt(detection_step(0.3, 2.0)) * 2.0 == doctest::Approx(0.3 / 50.0));
    CHECK(default_busy_step({0.0, 0, 1}, ServiceModel::constant(1.0)) == doctest::Approx(0.02));
    CHECK(default_busy_step({5.0, 0, 1}, ServiceModel::constant(1.0)) == doctest::Approx(0.004));
    const auto cfg = SimConfig::make({0.5, 0, 1}, ServiceModel::constant(1.0), {},
                                     PolicyKind::optimal_threshold({0.8, 1.0}));
    CHECK(cfg.grid.dt_idle == doctest::Approx(4e-4));
    const auto ov = SimConfig::make({0.5, 0, 1}, ServiceModel::constant(1.0), {},
                                    PolicyKind::optimal_threshold({0.8, 1.0}), 1e-5);
    CHECK(ov.grid.dt_idle == 1e-5);
    CHECK_THROWS_AS(SimConfig::make({0.5, 0, 1}, ServiceModel::constant(1.0), {}, PolicyKind::zero_wait(), -1.0),
                    Error);
}

TEST_CASE("busy-period moments") {
    const auto b = *busy_moments({0.5, 0, 1}, ServiceModel::constant(1.0));
    CHECK(b.m1 == doctest::Approx(1 - std::exp(-1.0)));
    CHECK(b.m2 == doctest::Approx(std::exp(-1.0)));  // int_0^1 (1 - e^{-u}) du
    const auto w = *busy_moments({0.0, 0, 2}, ServiceModel::exponential(1.0));
    CHECK(w.m1 == 1.0);
    CHECK(w.m2 == doctest::Approx(4.0));  // sigma^2 E[Y^2] / 2
    CHECK_FALSE(busy_moments({-0.2, 0, 1}, ServiceModel::lognormal_normalized(1.0)).has_value());
}

TEST_CASE("zero-wait Wiener with unit service") {
    // Error at lag u after sampling has variance u; cycles cover u in [1, 2].
    const auto cfg = SimConfig::make({0.0, 0, 1}, ServiceModel::constant(1.0), {}, PolicyKind::zero_wait());
    const auto c = run_cycles(cfg, 40000, 3, {});
    for (const auto& r : c) {
        CHECK(r.duration == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.err_integral >= 0.0);
        CHECK(r.discount_integral == r.duration);
    }
    const auto pr = path_ratio(c);
    CHECK(pr.value == doctest::Approx(1.5).epsilon(0.02));
    CHECK(cmc_ratio(c).value == doctest::Approx(1.5).epsilon(0.02));
}

TEST_CASE("thread count does not change results") {
    const auto cfg = SimConfig::make({0.5, 0, 1}, ServiceModel::lognormal_normalized(1.0), {0.1, 0.1},
                                     PolicyKind::optimal_threshold({0.7, 0.9}));
    ParallelOptions one, many;
    one.threads = 1;
    many.threads = 4;
    one.cycles_per_trajectory = many.cycles_per_trajectory = 200;
    const auto a = run_cycles(cfg, 3000, 17, one);
    const auto b = run_cycles(cfg, 3000, 17, many);
    REQUIRE(a.size() == b.size());
    bool same = true;
    for (std::size_t i = 0; i < a.size(); ++i)
        same = same && a[i].duration == b[i].duration && a[i].err_integral == b[i].err_integral &&
               a[i].noisy_err_integral == b[i].noisy_err_integral &&
               a[i].err_integral_cmc == b[i].err_integral_cmc;
    CHECK(same);
    const auto c = run_cycles(cfg, 3000, 18, one);
    CHECK(c[0].duration != a[0].duration);
}

TEST_CASE("cycle invariants and conditional estimator") {
    for (double theta : {0.5, 0.0, -0.2}) {
        CAPTURE(theta);
        const OuParams p{theta, 0, 1};
        const auto svc = ServiceModel::exponential(1.0);
        const auto cfg = SimConfig::make(p, svc, {}, PolicyKind::optimal_threshold({0.0, 1.0}));
        const auto c = run_cycles(cfg, 20000, 5, {});
        for (const auto& r : c) {
            CHECK(r.complete);
            CHECK(r.duration > 0.0);
            CHECK(r.discount_integral > 0.0);
            if (theta >= 0) CHECK(r.discount_integral <= r.duration * (1 + 1e-12));
        }
        const auto a = path_ratio(c), b = cmc_ratio(c);
        CHECK(std::abs(a.value - b.value) <= 3 * std::hypot(a.std_error, b.std_error));
        CHECK(b.std_error <= a.std_error * 1.05);
    }
    const auto cfg = SimConfig::make({-0.2, 0, 1}, ServiceModel::constant(1.0), {},
                                     PolicyKind::optimal_threshold({0.0, 1.0}));
    for (const auto& r : run_cycles(cfg, 2000, 6, {})) CHECK(r.discount_integral > r.duration);
}

TEST_CASE("periodic cycles") {
    const auto cfg = SimConfig::make({0.5, 0, 1}, ServiceModel::constant(0.5), {}, PolicyKind::periodic(2.0));
    const auto c = run_cycles(cfg, 2000, 7, {});
    for (const auto& r : c) CHECK(r.duration == doctest::Approx(2.0).epsilon(1e-9));
    // Slow channel: the period is shorter than the service time, so samples
    // wait for the idle server.
    const auto slow = SimConfig::make({0.5, 0, 1}, ServiceModel::constant(1.0), {}, PolicyKind::periodic(0.3));
    const auto s = run_cycles(slow, 2000, 7, {});
    for (const auto& r : s) CHECK(r.duration >= 1.0 - 1e-9);
}

TEST_CASE("cycle length limit") {
    auto cfg = SimConfig::make({0.0, 0, 1}, ServiceModel::constant(1.0), {},
                               PolicyKind::optimal_threshold({0.0, 100.0}), 0.01);
    cfg.max_cycle_duration = 10.0;
    CHECK_THROWS_AS(TrajectorySimulator(cfg, 1, 0), Error);
}

TEST_CASE("horizon runs truncate the final cycle") {
    const auto cfg = SimConfig::make({0.5, 0, 1}, ServiceModel::constant(1.0), {}, PolicyKind::zero_wait());
    const auto c = run_horizon(cfg, 400.5, 4, 9, {});
    std::size_t incomplete = 0;
    double t = 0.0;
    for (const auto& r : c) {
        incomplete += r.complete ? 0 : 1;
        t += r.duration;
    }
    CHECK(incomplete == 4);
    CHECK(t == doctest::Approx(400.5).epsilon(1e-9));
    CHECK_THROWS_AS(run_horizon(cfg, 0.0, 4, 9, {}), Error);
}

}  // TEST_SUITE
