// SPDX-License-Identifier: Apache-2.0
// Command-line front end. Talks to the library only through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ousamp/ousamp.h"

namespace {

enum Exit { kOk = 0, kFailed = 1, kConfig = 2, kSolver = 3, kOther = 4 };

int exit_code(ousamp_status s) {
    switch (s) {
        case OUSAMP_OK: return kOk;
        case OUSAMP_ERR_CONFIG:
        case OUSAMP_ERR_IO: return kConfig;
        case OUSAMP_ERR_BRACKET:
        case OUSAMP_ERR_NONCONVERGENCE: return kSolver;
        default: return kOther;
    }
}

int report(ousamp_status s) {
    std::cerr << "ousamp: " << ousamp_status_string(s) << ": " << ousamp_last_error() << "\n";
    return exit_code(s);
}

bool write_file(const std::string& path, const std::string& data) {
    std::ofstream f(path, std::ios::binary);
    f << data;
    return static_cast<bool>(f);
}

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool needs_config) {
    auto* opt = cmd->add_option("--config", c.config, "experiment configuration (JSON)");
    if (needs_config) opt->required();
    cmd->add_option("--seed", c.seed, "master seed (overrides sim.master_seed)");
    cmd->add_option("--threads", c.threads, "worker threads (0 = hardware concurrency)");
    cmd->add_option("--out", c.out, "output path (default: stdout)");
}

using Runner = ousamp_status (*)(const ousamp_experiment*, ousamp_result**);

int run_command(const Common& c, Runner runner, bool sweep) {
    ousamp_experiment* exp = nullptr;
    ousamp_status s = c.config.empty() ? ousamp_experiment_from_json("{}", &exp)
                                       : ousamp_experiment_from_file(c.config.c_str(), &exp);
    if (s != OUSAMP_OK) return report(s);
    if (c.seed) ousamp_experiment_set_seed(exp, *c.seed);
    if (c.threads) ousamp_experiment_set_threads(exp, *c.threads);

    ousamp_result* res = nullptr;
    s = runner(exp, &res);
    ousamp_experiment_free(exp);
    if (s != OUSAMP_OK) return report(s);

    const std::string text(ousamp_result_text(res), ousamp_result_size(res));
    const std::string aux = ousamp_result_aux(res);
    ousamp_result_free(res);

    if (c.out.empty()) {
        std::cout << text;
        return kOk;
    }
    if (!write_file(c.out, text)) {
        std::cerr << "ousamp: cannot write '" << c.out << "'\n";
        return kConfig;
    }
    if (sweep) {
        std::string dat = c.out;
        const auto dot = dat.rfind('.');
        if (dot != std::string::npos && dat.find('/', dot) == std::string::npos) dat.resize(dot);
        dat += ".dat";
        if (!write_file(dat, aux)) {
            std::cerr << "ousamp: cannot write '" << dat << "'\n";
            return kConfig;
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Threshold sampling of Ornstein-Uhlenbeck signals over a random-delay channel"};
    app.set_version_flag("--version", std::string(ousamp_version()));
    app.require_subcommand(1);

    Common solve, simulate, sweep;
    add_common(app.add_subcommand("solve", "solve for the optimal threshold policy"), solve, true);
    add_common(app.add_subcommand("simulate", "simulate a policy and report its MSE"), simulate, true);
    add_common(app.add_subcommand("sweep-fig2", "MSE versus log-normal scale parameter (CSV)"), sweep, false);
    unsigned st_threads = 0;
    auto* st = app.add_subcommand("selftest", "run the reduced invariant suites");
    st->add_option("--threads", st_threads, "worker threads (0 = hardware concurrency)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    if (app.got_subcommand("solve")) return run_command(solve, ousamp_run_solve, false);
    if (app.got_subcommand("simulate")) return run_command(simulate, ousamp_run_simulate, false);
    if (app.got_subcommand("sweep-fig2")) return run_command(sweep, ousamp_run_sweep_fig2, true);

    int passed = 0;
    ousamp_result* res = nullptr;
    const ousamp_status s = ousamp_run_selftest(st_threads, &passed, &res);
    if (s != OUSAMP_OK) return report(s);
    std::cout << ousamp_result_text(res);
    ousamp_result_free(res);
    return passed ? kOk : kFailed;
}
