// SPDX-License-Identifier: Apache-2.0
#include "ousamp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ousamp/error.hpp"

namespace ousamp::stats {

double pairwise_sum(std::span<const double> values) noexcept {
    if (values.size() <= 16) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

std::vector<double> block_sums(std::span<const double> values, std::size_t block) {
    std::vector<double> out;
    out.reserve(values.size() / block + 1);
    for (std::size_t start = 0; start < values.size(); start += block) {
        const std::size_t len = std::min(block, values.size() - start);
        out.push_back(pairwise_sum(values.subspan(start, len)));
    }
    return out;
}

}  // namespace

Estimate mean_blocks(std::span<const double> values, std::size_t block) {
    if (values.empty()) fail(ErrorCode::DomainError, "mean_blocks: no data");
    block = std::max<std::size_t>(1, block);
    const double n = static_cast<double>(values.size());
    const double mean = pairwise_sum(values) / n;
    const auto sums = block_sums(values, block);
    const std::size_t b = sums.size();
    if (b < 2) return {mean, 0.0};
    // Each block mean weighted by its length; jackknife of a linear statistic.
    double acc = 0.0;
    const double total = pairwise_sum(sums);
    for (std::size_t k = 0; k < b; ++k) {
        const double len = static_cast<double>(std::min(block, values.size() - k * block));
        const double loo = (total - sums[k]) / (n - len);
        acc += (loo - mean) * (loo - mean);
    }
    return {mean, std::sqrt(acc * (static_cast<double>(b) - 1.0) / static_cast<double>(b))};
}

Estimate ratio_jackknife(std::span<const double> num, std::span<const double> den,
                         std::size_t block) {
    if (num.size() != den.size() || num.empty())
        fail(ErrorCode::DomainError, "ratio_jackknife: mismatched or empty inputs");
    block = std::max<std::size_t>(1, block);
    const auto ns = block_sums(num, block);
    const auto ds = block_sums(den, block);
    const double n_tot = pairwise_sum(ns);
    const double d_tot = pairwise_sum(ds);
    const double r = n_tot / d_tot;
    const std::size_t b = ns.size();
    if (b < 2) return {r, 0.0};
    double acc = 0.0;
    for (std::size_t k = 0; k < b; ++k) {
        const double loo = (n_tot - ns[k]) / (d_tot - ds[k]);
        acc += (loo - r) * (loo - r);
    }
    return {r, std::sqrt(acc * (static_cast<double>(b) - 1.0) / static_cast<double>(b))};
}

}  // namespace ousamp::stats
