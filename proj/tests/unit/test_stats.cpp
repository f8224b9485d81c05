// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "ousamp/error.hpp"
#include "ousamp/random.hpp"
#include "ousamp/stats.hpp"

using namespace ousamp;

TEST_SUITE("stats") {

TEST_CASE("pairwise sum") {
    std::vector<double> v(1000);
    std::iota(v.begin(), v.end(), 1.0);
    CHECK(stats::pairwise_sum(v) == 500500.0);
    CHECK(stats::pairwise_sum({}) == 0.0);
}

TEST_CASE("block standard error of iid data") {
    RandomStream rs(9, 0, StreamPurpose::Test);
    std::vector<double> v(100000);
    for (auto& x : v) x = 2.0 + 3.0 * rs.normal();
    const auto e = stats::mean_blocks(v, 100);
    CHECK(std::abs(e.value - 2.0) < 4.0 * 3.0 / std::sqrt(1e5));
    CHECK(e.std_error == doctest::Approx(3.0 / std::sqrt(1e5)).epsilon(0.15));
    CHECK_THROWS_AS(stats::mean_blocks({}, 10), Error);
    const std::vector<double> one{4.0};
    CHECK(stats::mean_blocks(one, 10).value == 4.0);
    CHECK(stats::mean_blocks(one, 10).std_error == 0.0);
}

TEST_CASE("ratio jackknife") {
    RandomStream rs(10, 0, StreamPurpose::Test);
    std::vector<double> num(50000), den(50000);
    for (std::size_t i = 0; i < num.size(); ++i) {
        den[i] = 1.0 + rs.uniform();
        num[i] = 0.5 * den[i] + 0.1 * rs.normal();
    }
    const auto r = stats::ratio_jackknife(num, den, 50);
    CHECK(std::abs(r.value - 0.5) < 4.0 * r.std_error);
    CHECK(r.std_error > 0.0);
    CHECK(r.std_error < 1e-3);
    const std::vector<double> a{1.0, 2.0}, b{1.0};
    CHECK_THROWS_AS(stats::ratio_jackknife(a, b, 1), Error);
    CHECK(stats::ci95(1.0) == doctest::Approx(1.96).epsilon(1e-3));
}

}  // TEST_SUITE
