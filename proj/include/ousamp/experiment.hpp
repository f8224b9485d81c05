// SPDX-License-Identifier: Apache-2.0
#pragma once

// Experiment configuration and the command implementations behind the CLI.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ousamp/channel.hpp"
#include "ousamp/process.hpp"

namespace ousamp {

struct PolicyConfig {
    enum class Kind { Solve, Threshold, ZeroWait, Periodic };
    Kind kind = Kind::Solve;
    std::optional<double> beta;    // threshold: v derived from beta, or
    std::optional<double> v;       // threshold: explicit v
    std::optional<double> period;  // periodic
};

struct SimSettings {
    std::optional<double> dt_override;
    std::size_t n_cycles = 20000;
    std::optional<double> horizon;
    std::optional<std::uint64_t> master_seed;
    unsigned threads = 0;
    double tol_rel = 1e-3;
    std::size_t pilot_cycles = 2000;
    std::size_t search_cycles = 20000;
    std::size_t validation_cycles = 20000;
    std::size_t discount_draws = 200000;
    std::size_t trajectories = 32;
};

struct SweepSettings {
    std::string variable = "alpha";
    std::vector<double> values;
};

struct ExperimentConfig {
    std::optional<double> theta;
    double mu = 0.0;
    std::optional<double> sigma;
    ServiceModel service = ServiceModel::constant(1.0);
    std::optional<NoiseModel> noise;
    PolicyConfig policy;
    SimSettings sim;
    std::optional<SweepSettings> sweep;

    /// Process parameters; ConfigError when theta or sigma is missing.
    OuParams process() const;
    std::uint64_t seed() const;  // ConfigError when no master_seed was given
};

/// Parses and validates a JSON document. Errors are ConfigError with a
/// line:column position for syntax errors and a dotted field path otherwise.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON of the resolved configuration (defaults filled in).
std::string canonical_json(const ExperimentConfig& config);

/// FNV-1a 64 of canonical_json, as 16 lowercase hex digits.
std::string config_hash(const ExperimentConfig& config);

/// JSON result record of a beta solve.
std::string run_solve(const ExperimentConfig& config);

/// JSON result record of a fixed-policy (or solved-policy) simulation.
std::string run_simulate(const ExperimentConfig& config);

struct SweepOutput {
    std::string csv;  // RFC 4180, CRLF line endings
    std::string dat;  // whitespace-separated, '#' comment header
    std::size_t failed_rows = 0;
};

/// MSE versus log-normal scale parameter, with and without noise.
SweepOutput run_sweep_fig2(const ExperimentConfig& config);

/// Column names of the sweep CSV, in order.
const std::vector<std::string>& sweep_columns();

}  // namespace ousamp
