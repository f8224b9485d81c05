// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ousamp/error.hpp"
#include "ousamp/process.hpp"
#include "ousamp/specfun.hpp"

using namespace ousamp;

namespace {

struct Moments {
    double mean, var, se_mean, se_var;
};

template <class F>
Moments moments(std::size_t n, F draw) {
    double s = 0, s2 = 0, s4 = 0;
    std::vector<double> xs(n);
    for (auto& x : xs) {
        x = draw();
        s += x;
    }
    const double m = s / n;
    for (double x : xs) {
        const double d = (x - m) * (x - m);
        s2 += d;
        s4 += d * d;
    }
    const double var = s2 / (n - 1);
    const double m4 = s4 / n;
    return {m, var, std::sqrt(var / n), std::sqrt((m4 - var * var) / n)};
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

}  // namespace

TEST_SUITE("process") {

TEST_CASE("parameter validation and regimes") {
    CHECK(OuParams{0.5, 0, 1}.regime() == OuParams::Regime::Stable);
    CHECK(OuParams{0.0, 0, 1}.regime() == OuParams::Regime::Wiener);
    CHECK(OuParams{5e-11, 0, 1}.regime() == OuParams::Regime::Wiener);
    CHECK(OuParams{-0.5, 0, 1}.regime() == OuParams::Regime::Unstable);
    CHECK_THROWS_AS((OuParams{0.5, 0, 0}.validate()), Error);
    CHECK_THROWS_AS((OuParams{NAN, 0, 1}.validate()), Error);
}

TEST_CASE("zero-time transition is the identity") {
    RandomStream rs(1, 0, StreamPurpose::Test);
    CHECK(transition_sample(3.25, 0.0, {0.5, 1.0, 2.0}, rs) == 3.25);
    CHECK_THROWS_AS(transition_sample(0.0, -1.0, {0.5, 0, 1}, rs), Error);
}

TEST_CASE("one-step moments match the exact law") {
    const std::size_t n = 1000000;
    for (double theta : {-0.5, 0.0, 0.5}) {
        CAPTURE(theta);
        const OuParams p{theta, 0.7, 1.3};
        const double x0 = -0.4, dt = 1.0;
        RandomStream rs(2, 0, StreamPurpose::Test, static_cast<std::uint32_t>(theta * 10 + 10));
        const auto m = moments(n, [&] { return transition_sample(x0, dt, p, rs); });
        const double mean = theta == 0.0 ? x0 : x0 * std::exp(-theta) + p.mu * (1 - std::exp(-theta));
        const double var = theta == 0.0 ? p.sigma * p.sigma * dt
                                        : p.sigma * p.sigma * (1 - std::exp(-2 * theta)) / (2 * theta);
        CHECK(std::abs(m.mean - mean) <= 4 * m.se_mean);
        CHECK(std::abs(m.var - var) <= 4 * m.se_var);
    }
}

TEST_CASE("closed-form variance examples") {
    const std::size_t n = 1000000;
    RandomStream a(3, 0, StreamPurpose::Test);
    const auto s = moments(n, [&] { return transition_sample(0.0, 1.0, {0.5, 0, 1}, a); });
    CHECK(s.var == doctest::Approx(0.63212).epsilon(0.003 / 0.63212));
    RandomStream b(3, 1, StreamPurpose::Test);
    const auto u = moments(n, [&] { return transition_sample(0.0, 1.0, {-0.5, 0, 1}, b); });
    CHECK(std::abs(u.var - 1.71828) <= 0.01);
}

TEST_CASE("Chapman-Kolmogorov: two half steps equal one step") {
    const std::size_t n = 100000;
    const double crit = 1.628 * std::sqrt(2.0 / n);  // 1% level
    for (double theta : {-0.5, 0.0, 0.5}) {
        CAPTURE(theta);
        const OuParams p{theta, 0.3, 1.0};
        RandomStream r1(4, 0, StreamPurpose::Test), r2(4, 1, StreamPurpose::Test);
        std::vector<double> one(n), two(n);
        for (std::size_t i = 0; i < n; ++i) {
            one[i] = transition_sample(1.0, 0.8, p, r1);
            two[i] = transition_sample(transition_sample(1.0, 0.4, p, r2), 0.4, p, r2);
        }
        CHECK(ks_statistic(one, two) < crit);
    }
}

TEST_CASE("gap variance") {
    CHECK(gap_variance(0.0, {0.5, 0, 1}) == 0.0);
    CHECK(gap_variance(1.0, {0.5, 0, 1}) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-14));
    CHECK(std::abs(gap_variance(1.0, {1e-12, 0, 1}) - 1.0) <= 1e-9);
    CHECK(gap_variance(2.0, {0.0, 0, 3}) == 18.0);
    CHECK_THROWS_AS(gap_variance(-1.0, {0.5, 0, 1}), Error);
    for (double theta : {-1.0, -1e-6, 0.0, 1e-6, 0.5, 2.0}) {
        double prev = 0.0;
        for (double y = 0.01; y < 20.0; y += 0.01) {
            const double g = gap_variance(y, {theta, 0, 1});
            CHECK(g >= prev);
            if (theta > 0) CHECK(g <= 1.0 / (2 * theta));
            prev = g;
        }
        if (theta < 0) CHECK(gap_variance(50.0 / std::abs(theta), {theta, 0, 1}) > 1.0 / (2 * std::abs(theta)));
    }
}

TEST_CASE("gap samples") {
    RandomStream rs(5, 0, StreamPurpose::Test);
    CHECK(sample_gap(0.0, {0.5, 0, 1}, rs).value == 0.0);
    const std::size_t n = 1000000;
    const auto w = moments(n, [&] { return sample_gap(4.0, {0.0, 0, 1}, rs).value; });
    CHECK(std::sqrt(w.var) == doctest::Approx(2.0).epsilon(0.01));
    const auto st = moments(n, [&] { return sample_gap(50.0, {0.5, 0, 1}, rs).value; });
    CHECK(st.var == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("lower bound closed forms") {
    const auto one = ServiceModel::constant(1.0);
    CHECK(mse_lower_bound(one, {0.0, 0, 1}, 1, 0) == 1.0);
    CHECK(mse_lower_bound(one, {0.5, 0, 1}, 1, 0) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-15));
    CHECK(mse_lower_bound(one, {-0.5, 0, 1}, 1, 0) == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-15));
    CHECK(mse_lower_bound(ServiceModel::exponential(2.0), {0.0, 0, 1}, 1, 0) == 2.0);
    // E[1 - e^{-Y}] with Y ~ Exp(1) is 1/2.
    CHECK(mse_lower_bound(ServiceModel::exponential(1.0), {0.5, 0, 1}, 1, 0) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::isinf(mse_lower_bound(ServiceModel::lognormal_normalized(1.0), {-0.2, 0, 1}, 1000, 0)));
    CHECK(std::isinf(mse_lower_bound(ServiceModel::exponential(1.0), {-0.5, 0, 1}, 1000, 0)));
}

TEST_CASE("exit time preconditions") {
    RandomStream rs(6, 0, StreamPurpose::Test);
    CHECK_THROWS_AS(simulate_exit_time(1.0, 1.0, {0.5, 0, 1}, 1e-3, rs), Error);
    CHECK_THROWS_AS(simulate_exit_time(0.0, 1.0, {0.5, 0, 1}, 0.0, rs), Error);
    CHECK_THROWS_AS(simulate_exit_time(0.0, 100.0, {0.5, 0, 1}, 0.01, rs, 1.0), Error);
    CHECK(simulate_exit_time(0.0, 1.0, {0.5, 0, 1}, 1e-3, rs) > 0.0);
}

}  // TEST_SUITE

TEST_SUITE("exit_time") {

// Grid monitoring overshoots the barrier by about 0.58 sigma sqrt(dt); these
// oracles use steps well inside the detection rule so that the bias is small
// against the Monte Carlo error at these sample sizes.
TEST_CASE("Wiener mean exit time") {
    const double v = 1.0, dt = (v / 200.0) * (v / 200.0);
    const std::size_t n = 20000;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        RandomStream rs(7, i, StreamPurpose::Test);
        s += simulate_exit_time(0.0, v, {0.0, 0, 1}, dt, rs);
    }
    CHECK(s / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("OU exit-time Laplace transform") {
    const OuParams p{0.5, 0.0, 1.0};
    const double v = 1.0, dt = (v / 300.0) * (v / 300.0);
    const std::size_t n = 100000;
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        RandomStream rs(8, i, StreamPurpose::Test);
        const double z = std::exp(-2.0 * p.theta * simulate_exit_time(0.0, v, p, dt, rs));
        s += z;
        s2 += z * z;
    }
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    const double expected = specfun::kummer_1f1_1_half(0.0) / specfun::kummer_1f1_1_half(0.5);
    CHECK(std::abs(mean - expected) <= 3.0 * se);
}

}  // TEST_SUITE
