// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>

namespace ousamp::stats {

/// Pairwise summation; the result depends only on the order of `values`.
double pairwise_sum(std::span<const double> values) noexcept;

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Mean with a batch-means standard error over consecutive blocks.
Estimate mean_blocks(std::span<const double> values, std::size_t block);

/// sum(num) / sum(den) with a delete-one-block jackknife standard error.
Estimate ratio_jackknife(std::span<const double> num, std::span<const double> den,
                         std::size_t block);

/// 95% half-width for a standard error.
inline double ci95(double std_error) noexcept { return 1.959963984540054 * std_error; }

}  // namespace ousamp::stats
