// SPDX-License-Identifier: Apache-2.0
#include "ousamp/ousamp.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "ousamp/error.hpp"
#include "ousamp/experiment.hpp"
#include "ousamp/policy.hpp"
#include "ousamp/selftest.hpp"
#include "ousamp/specfun.hpp"

struct ousamp_experiment {
    ousamp::ExperimentConfig config;
};

struct ousamp_result {
    std::string text;
    std::string aux;
};

namespace {

thread_local std::string g_last_error;

ousamp_status status_of(ousamp::ErrorCode code) {
    using ousamp::ErrorCode;
    switch (code) {
        case ErrorCode::DomainError: return OUSAMP_ERR_DOMAIN;
        case ErrorCode::DomainOverflow: return OUSAMP_ERR_OVERFLOW;
        case ErrorCode::OrderViolation: return OUSAMP_ERR_ORDER;
        case ErrorCode::StaleState: return OUSAMP_ERR_STALE;
        case ErrorCode::NonConvergence: return OUSAMP_ERR_NONCONVERGENCE;
        case ErrorCode::BracketFailure: return OUSAMP_ERR_BRACKET;
        case ErrorCode::ConfigError: return OUSAMP_ERR_CONFIG;
        case ErrorCode::IoError: return OUSAMP_ERR_IO;
    }
    return OUSAMP_ERR_INTERNAL;
}

template <class F>
ousamp_status guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return OUSAMP_OK;
    } catch (const ousamp::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return OUSAMP_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return OUSAMP_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return OUSAMP_ERR_INTERNAL;
    }
}

ousamp_status invalid(const char* what) {
    g_last_error = what;
    return OUSAMP_ERR_INVALID_ARGUMENT;
}

template <class F>
ousamp_status scalar(double* out, F&& f) {
    if (!out) return invalid("null output pointer");
    return guarded([&] { *out = f(); });
}

template <class F>
ousamp_status run(const ousamp_experiment* exp, ousamp_result** out, F&& f) {
    if (!exp || !out) return invalid("null argument");
    *out = nullptr;
    return guarded([&] {
        auto r = std::make_unique<ousamp_result>();
        f(exp->config, *r);
        *out = r.release();
    });
}

}  // namespace

extern "C" {

const char* ousamp_version(void) { return "1.0.0"; }

const char* ousamp_status_string(ousamp_status s) {
    switch (s) {
        case OUSAMP_OK: return "ok";
        case OUSAMP_ERR_DOMAIN: return "DomainError";
        case OUSAMP_ERR_OVERFLOW: return "DomainOverflow";
        case OUSAMP_ERR_ORDER: return "OrderViolation";
        case OUSAMP_ERR_STALE: return "StaleState";
        case OUSAMP_ERR_NONCONVERGENCE: return "NonConvergence";
        case OUSAMP_ERR_BRACKET: return "BracketFailure";
        case OUSAMP_ERR_CONFIG: return "ConfigError";
        case OUSAMP_ERR_IO: return "IoError";
        case OUSAMP_ERR_INVALID_ARGUMENT: return "InvalidArgument";
        case OUSAMP_ERR_INTERNAL: return "InternalError";
    }
    return "unknown status";
}

const char* ousamp_last_error(void) { return g_last_error.c_str(); }

ousamp_status ousamp_experiment_from_json(const char* json, ousamp_experiment** out) {
    if (!json || !out) return invalid("null argument");
    *out = nullptr;
    return guarded([&] { *out = new ousamp_experiment{ousamp::parse_config(json)}; });
}

ousamp_status ousamp_experiment_from_file(const char* path, ousamp_experiment** out) {
    if (!path || !out) return invalid("null argument");
    *out = nullptr;
    return guarded([&] { *out = new ousamp_experiment{ousamp::load_config(path)}; });
}

ousamp_status ousamp_experiment_set_seed(ousamp_experiment* exp, uint64_t seed) {
    if (!exp) return invalid("null experiment");
    exp->config.sim.master_seed = seed;
    return OUSAMP_OK;
}

ousamp_status ousamp_experiment_set_threads(ousamp_experiment* exp, unsigned threads) {
    if (!exp) return invalid("null experiment");
    exp->config.sim.threads = threads;
    return OUSAMP_OK;
}

ousamp_status ousamp_experiment_hash(const ousamp_experiment* exp, char buf[17]) {
    if (!exp || !buf) return invalid("null argument");
    return guarded([&] {
        const std::string h = ousamp::config_hash(exp->config);
        std::memcpy(buf, h.c_str(), 17);
    });
}

void ousamp_experiment_free(ousamp_experiment* exp) { delete exp; }

ousamp_status ousamp_run_solve(const ousamp_experiment* exp, ousamp_result** out) {
    return run(exp, out, [](const auto& c, ousamp_result& r) { r.text = ousamp::run_solve(c); });
}

ousamp_status ousamp_run_simulate(const ousamp_experiment* exp, ousamp_result** out) {
    return run(exp, out, [](const auto& c, ousamp_result& r) { r.text = ousamp::run_simulate(c); });
}

ousamp_status ousamp_run_sweep_fig2(const ousamp_experiment* exp, ousamp_result** out) {
    return run(exp, out, [](const auto& c, ousamp_result& r) {
        auto s = ousamp::run_sweep_fig2(c);
        r.text = std::move(s.csv);
        r.aux = std::move(s.dat);
    });
}

ousamp_status ousamp_run_selftest(unsigned threads, int* passed, ousamp_result** out) {
    if (!passed || !out) return invalid("null argument");
    *out = nullptr;
    return guarded([&] {
        const auto rep = ousamp::run_selftest(threads);
        auto r = std::make_unique<ousamp_result>();
        r->text = rep.text();
        *passed = rep.passed() ? 1 : 0;
        *out = r.release();
    });
}

const char* ousamp_result_text(const ousamp_result* r) { return r ? r->text.c_str() : ""; }
size_t ousamp_result_size(const ousamp_result* r) { return r ? r->text.size() : 0; }
const char* ousamp_result_aux(const ousamp_result* r) { return r ? r->aux.c_str() : ""; }
void ousamp_result_free(ousamp_result* r) { delete r; }

ousamp_status ousamp_erfi(double x, double* out) {
    return scalar(out, [&] { return ousamp::specfun::erfi(x); });
}
ousamp_status ousamp_dawson(double x, double* out) {
    return scalar(out, [&] { return ousamp::specfun::dawson(x); });
}
ousamp_status ousamp_g(double x, double* out) {
    return scalar(out, [&] { return ousamp::specfun::g_func(x); });
}
ousamp_status ousamp_k(double x, double* out) {
    return scalar(out, [&] { return ousamp::specfun::k_func(x); });
}
ousamp_status ousamp_g_inv(double y, double* out) {
    return scalar(out, [&] { return ousamp::specfun::g_inv(y); });
}
ousamp_status ousamp_k_inv(double y, double* out) {
    return scalar(out, [&] { return ousamp::specfun::k_inv(y); });
}
ousamp_status ousamp_kummer_1f1(double z, double* out) {
    return scalar(out, [&] { return ousamp::specfun::kummer_1f1_1_half(z); });
}

ousamp_status ousamp_threshold_v(double beta, double theta, double mu, double sigma, double mse_y,
                                 double* out) {
    return scalar(out, [&] {
        const ousamp::OuParams p{theta, mu, sigma};
        p.validate();
        return ousamp::threshold_v(beta, p, mse_y);
    });
}

}  // extern "C"
