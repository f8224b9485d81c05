// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ousamp/channel.hpp"
#include "ousamp/error.hpp"

using namespace ousamp;

namespace {

double sample_mean(const ServiceModel& m, std::size_t n, std::uint64_t seed) {
    RandomStream rs(seed, 0, StreamPurpose::Test);
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += draw_service(m, rs);
    return s / n;
}

}  // namespace

TEST_SUITE("channel") {

TEST_CASE("service laws") {
    RandomStream rs(1, 0, StreamPurpose::Test);
    CHECK(draw_service(ServiceModel::constant(1.0), rs) == 1.0);
    CHECK(sample_mean(ServiceModel::lognormal_normalized(0.2), 1000000, 2) == doctest::Approx(1.0).epsilon(0.005));
    CHECK(sample_mean(ServiceModel::lognormal_normalized(1.0), 1000000, 3) == doctest::Approx(1.0).epsilon(0.005));
    CHECK(sample_mean(ServiceModel::exponential(2.0), 1000000, 4) == doctest::Approx(2.0).epsilon(0.01));
    CHECK(sample_mean(ServiceModel::gamma(2.0, 0.5), 1000000, 5) == doctest::Approx(1.0).epsilon(0.01));
    for (int i = 0; i < 1000; ++i) CHECK(draw_service(ServiceModel::gamma(0.05, 1.0), rs) > 0.0);
    CHECK(ServiceModel::lognormal_normalized(1.6).mean() == 1.0);
    CHECK(ServiceModel::gamma(2.0, 3.0).mean() == 6.0);
    CHECK_THROWS_AS(ServiceModel::constant(0.0).validate(), Error);
    CHECK_THROWS_AS(ServiceModel::gamma(1.0, -1.0).validate(), Error);
    CHECK_THROWS_AS(ServiceModel::exponential(INFINITY).validate(), Error);
}

TEST_CASE("Laplace transforms") {
    CHECK(*service_mgf(ServiceModel::constant(2.0), -0.5) == doctest::Approx(std::exp(-1.0)));
    CHECK(*service_mgf(ServiceModel::exponential(1.0), -1.0) == doctest::Approx(0.5));
    CHECK(std::isinf(*service_mgf(ServiceModel::exponential(1.0), 1.0)));
    CHECK(*service_mgf(ServiceModel::gamma(2.0, 1.0), -1.0) == doctest::Approx(0.25));
    CHECK(std::isinf(*service_mgf(ServiceModel::lognormal_normalized(1.0), 0.4)));
    // Quadrature against a plain Monte Carlo average.
    for (double alpha : {0.2, 1.0, 1.6}) {
        CAPTURE(alpha);
        const auto m = ServiceModel::lognormal_normalized(alpha);
        RandomStream rs(6, 0, StreamPurpose::Test);
        const std::size_t n = 1000000;
        double s = 0, s2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = std::exp(-draw_service(m, rs));
            s += e;
            s2 += e * e;
        }
        const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
        CHECK(std::abs(*service_mgf(m, -1.0) - mean) <= 4 * se);
    }
    CHECK(service_second_moment(ServiceModel::exponential(2.0)) == 8.0);
    CHECK(service_second_moment(ServiceModel::lognormal_normalized(1.0)) == doctest::Approx(std::exp(1.0)));
}

TEST_CASE("noise") {
    RandomStream rs(7, 0, StreamPurpose::Test);
    CHECK(corrupt(1.5, NoiseModel{}, rs) == 1.5);
    const std::size_t n = 1000000;
    double s = 0, s2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double q = corrupt(0.0, NoiseModel{0.1, 0.1}, rs);
        s += q;
        s2 += q * q;
    }
    CHECK(s2 / n == doctest::Approx(0.2).epsilon(0.02));
    double m = 0;
    for (std::size_t i = 0; i < n; ++i) m += corrupt(5.0, NoiseModel{0.1, 0.0}, rs);
    CHECK(std::abs(m / n - 5.0) <= 3 * std::sqrt(0.1 / n));
    CHECK(NoiseModel{0.1, 0.1}.total_variance() == doctest::Approx(0.2));
    CHECK_THROWS_AS((NoiseModel{-0.1, 0.0}.validate()), Error);
}

TEST_CASE("noise and service streams are uncorrelated") {
    const std::size_t n = 200000;
    double sxy = 0, sx = 0, sy = 0, sx2 = 0, sy2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        RandomStream srv(11, 0, StreamPurpose::Service, static_cast<std::uint32_t>(i));
        RandomStream nz(11, 0, StreamPurpose::Noise, static_cast<std::uint32_t>(i));
        const double y = draw_service(ServiceModel::exponential(1.0), srv);
        const double e = draw_noise(NoiseModel{0.1, 0.1}, nz);
        sx += y;
        sy += e;
        sxy += y * e;
        sx2 += y * y;
        sy2 += e * e;
    }
    const double cov = sxy / n - sx / n * sy / n;
    const double rho = cov / std::sqrt((sx2 / n - sx * sx / n / n) * (sy2 / n - sy * sy / n / n));
    CHECK(std::abs(rho) <= 3.0 / std::sqrt(double(n)));
}

TEST_CASE("FCFS channel") {
    FcfsChannel ch(0.0, 1.0);  // S_0 = 0, D_0 = Y_0
    CHECK(*ch.next_delivery() == 1.0);
    CHECK_FALSE(ch.idle(0.5));
    CHECK(ch.idle(1.0));
    FcfsChannel c2(0.0, 0.0);
    c2.pop_delivered(0.0);
    CHECK(c2.submit(0.0, 0, 0, 1.0).d == 1.0);
    CHECK(c2.submit(0.5, 0, 0, 1.0).d == 2.0);
    CHECK(c2.in_flight() == 2);
    CHECK_FALSE(c2.pop_delivered(0.9));
    CHECK(c2.pop_delivered(1.0)->s == 0.0);
    CHECK(c2.pop_delivered(2.0)->s == 0.5);
    CHECK(c2.submit(3.0, 0, 0, 0.5).d == 3.5);
    CHECK_THROWS_AS(c2.submit(2.0, 0, 0, 1.0), Error);
}

TEST_CASE("FCFS recursion on random traffic") {
    RandomStream rs(12, 0, StreamPurpose::Test);
    FcfsChannel ch(0.0, 0.3);
    double s = 0.0, last_d = 0.3;
    for (int i = 0; i < 10000; ++i) {
        s += -0.8 * std::log(rs.uniform());
        const double y = draw_service(ServiceModel::exponential(1.0), rs);
        const auto p = ch.submit(s, 0, 0, y);
        CHECK(p.d == std::max(s, last_d) + y);
        CHECK(p.d >= p.s + p.y);
        last_d = p.d;
        while (ch.pop_delivered(s)) {}
    }
}

}  // TEST_SUITE
