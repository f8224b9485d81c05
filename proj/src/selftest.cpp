// SPDX-License-Identifier: Apache-2.0
#include "ousamp/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "ousamp/error.hpp"
#include "ousamp/estimation.hpp"
#include "ousamp/eval.hpp"
#include "ousamp/random.hpp"
#include "ousamp/solver.hpp"
#include "ousamp/specfun.hpp"

namespace ousamp {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

struct Check {
    bool ok = true;
    std::string why;
    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            why = what;
        }
    }
};

Check specfun_monotone() {
    Check c;
    double gp = specfun::g_func(0.0), kp = specfun::k_func(0.0);
    for (int i = 1; i <= 500; ++i) {
        const double x = 0.01 * i;
        const double g = specfun::g_func(x), k = specfun::k_func(x);
        c.expect(g > gp, "G not increasing at x=" + num(x));
        c.expect(k < kp, "K not decreasing at x=" + num(x));
        gp = g;
        kp = k;
    }
    return c;
}

Check specfun_roundtrip() {
    Check c;
    double worst = 0.0;
    for (int i = 0; i <= 120; ++i) {
        const double y = std::pow(10.0, 6.0 * i / 120.0);
        const double e = std::abs(specfun::g_func(specfun::g_inv(y)) - y) / y;
        worst = std::max(worst, e);
        c.expect(e <= 1e-9, "G(G^-1(y)) off by " + num(e) + " at y=" + num(y));
    }
    for (int i = 0; i <= 120; ++i) {
        const double y = std::pow(10.0, -6.0 * i / 120.0);
        const double e = std::abs(specfun::k_func(specfun::k_inv(y)) - y) / y;
        worst = std::max(worst, e);
        c.expect(e <= 1e-9, "K(K^-1(y)) off by " + num(e) + " at y=" + num(y));
    }
    if (c.ok) c.why = "max rel err " + num(worst);
    return c;
}

Check kummer_series() {
    Check c;
    double worst = 0.0;
    for (int i = -50; i <= 50; ++i) {
        const double z = 0.1 * i;
        // 1F1(1; 1/2; z) = sum_k z^k / (1/2)_k
        double term = 1.0, sum = 1.0;
        for (int k = 0; k < 200; ++k) {
            term *= z / (0.5 + k);
            sum += term;
        }
        const double e = std::abs(specfun::kummer_1f1_1_half(z) - sum) / std::abs(sum);
        worst = std::max(worst, e);
        c.expect(e <= 1e-8, "1F1 identity off by " + num(e) + " at z=" + num(z));
    }
    if (c.ok) c.why = "max rel err " + num(worst);
    return c;
}

Check transition_moments() {
    Check c;
    const std::size_t n = 100000;
    for (double th : {-0.5, 0.0, 0.5}) {
        const OuParams p{th, 0.3, 1.0};
        RandomStream rng(7, 0, StreamPurpose::Test, static_cast<std::uint32_t>(10 * (th + 1)));
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = transition_sample(1.0, 1.0, p, rng);
            s += x;
            s2 += x * x;
        }
        const double mean = s / n, var = s2 / n - mean * mean;
        const auto tc = transition_coeffs(1.0, p);
        const double m0 = tc.decay * 1.0 + tc.shift, v0 = tc.stddev * tc.stddev;
        c.expect(std::abs(mean - m0) <= 4.0 * std::sqrt(v0 / n), "mean off at theta=" + num(th));
        c.expect(std::abs(var - v0) <= 4.0 * v0 * std::sqrt(2.0 / n), "variance off at theta=" + num(th));
    }
    return c;
}

Check lower_bound_closed_forms() {
    Check c;
    const auto y1 = ServiceModel::constant(1.0);
    const double a = mse_lower_bound(y1, {0.5, 0.0, 1.0}, 1000, 1);
    const double b = mse_lower_bound(y1, {0.0, 0.0, 1.0}, 1000, 1);
    const double d = mse_lower_bound(y1, {-0.5, 0.0, 1.0}, 1000, 1);
    c.expect(std::abs(a - (1.0 - std::exp(-1.0))) <= 1e-12, "theta=0.5 gives " + num(a));
    c.expect(std::abs(b - 1.0) <= 1e-12, "theta=0 gives " + num(b));
    c.expect(std::abs(d - (std::exp(1.0) - 1.0)) <= 1e-12, "theta=-0.5 gives " + num(d));
    return c;
}

Check threshold_identities() {
    Check c;
    const double v1 = threshold_v(4.0 / 3.0, {0.0, 0.0, 1.0}, 1.0);
    c.expect(std::abs(v1 - 1.0) <= 1e-12, "theta=0, beta=4/3 gives v=" + num(v1));
    for (double th : {0.5, 0.0, -0.2})
        c.expect(threshold_v(0.7, {th, 0.0, 1.0}, 0.7) == 0.0, "v(mse_y) != 0 at theta=" + num(th));
    const double w = threshold_v(1.3, {0.0, 0.0, 1.0}, 1.0);
    for (double th : {1e-6, -1e-6}) {
        const OuParams p{th, 0.0, 1.0};
        const double m = 1.0;
        const double v = threshold_v(m + 0.3, p, m);
        c.expect(std::abs(v - w) <= 1e-3 * w, "regime continuity off at theta=" + num(th));
    }
    return c;
}

Check channel_fcfs() {
    Check c;
    FcfsChannel ch(0.0, 1.0);
    const auto p1 = ch.submit(0.5, 0.0, 0.0, 2.0);
    c.expect(p1.d == 3.0, "queued delivery at " + num(p1.d));
    bool threw = false;
    try {
        ch.submit(0.4, 0.0, 0.0, 1.0);
    } catch (const Error& e) {
        threw = e.code() == ErrorCode::OrderViolation;
    }
    c.expect(threw, "out-of-order submission accepted");
    EstimatorState st{{0.5, 0.0, 1.0}, 0.0, SamplePacket{0.0, 1.0, 1.0, 2.0, 2.0}};
    threw = false;
    try {
        estimate(1.0, st);
    } catch (const Error& e) {
        threw = e.code() == ErrorCode::StaleState;
    }
    c.expect(threw, "estimate before delivery accepted");
    return c;
}

Check thread_determinism(unsigned threads) {
    Check c;
    const auto cfg = SimConfig::make({0.5, 0.0, 1.0}, ServiceModel::lognormal_normalized(1.0),
                                     {0.1, 0.1}, PolicyKind::optimal_threshold({0.8, 1.0}));
    ParallelOptions a, b;
    a.threads = 1;
    b.threads = std::max(2u, threads);
    a.cycles_per_trajectory = b.cycles_per_trajectory = 100;
    const auto x = run_cycles(cfg, 600, 99, a);
    const auto y = run_cycles(cfg, 600, 99, b);
    bool same = x.size() == y.size();
    for (std::size_t i = 0; same && i < x.size(); ++i)
        same = x[i].duration == y[i].duration && x[i].err_integral == y[i].err_integral &&
               x[i].noisy_err_integral == y[i].noisy_err_integral;
    c.expect(same, "cycles differ between 1 and " + std::to_string(b.threads) + " threads");
    return c;
}

Check short_solve(unsigned threads) {
    Check c;
    SolverOptions o;
    o.pilot_cycles = 500;
    o.search_cycles = 3000;
    o.validation_cycles = 3000;
    o.tol_rel = 5e-3;
    o.parallel.threads = threads;
    const auto s = solve_beta({0.5, 0.0, 1.0}, ServiceModel::constant(1.0), o, 2024);
    c.expect(s.beta > 1.0 - std::exp(-1.0) && s.beta < 1.0, "beta=" + num(s.beta) + " outside (0.632, 1)");
    const double tol = 3.0 * std::hypot(s.validation_ratio_se, 5e-3 * s.beta);
    c.expect(std::abs(s.validation_ratio - s.beta) <= tol,
             "validated MSE " + num(s.validation_ratio) + " vs beta " + num(s.beta));
    if (c.ok) c.why = "beta=" + num(s.beta) + " v=" + num(s.v);
    return c;
}

Check discount_formula(unsigned threads) {
    Check c;
    const OuParams p{0.5, 0.0, 1.0};
    const auto svc = ServiceModel::constant(1.0);
    ParallelOptions par;
    par.threads = threads;
    const auto f = discount_integral_mean(1.0, p, svc, 100000, 5, par);
    const auto cfg = SimConfig::make(p, svc, {}, PolicyKind::optimal_threshold({0.75, 1.0}));
    const auto cyc = run_cycles(cfg, 5000, 6, par);
    std::vector<double> d;
    for (const auto& r : cyc) d.push_back(r.discount_integral);
    const auto sim = stats::mean_blocks(d, 50);
    const double se = std::hypot(f.std_error, sim.std_error);
    c.expect(std::abs(f.value - sim.value) <= 3.0 * se,
             "formula " + num(f.value) + " vs path " + num(sim.value) + " (se " + num(se) + ")");
    if (c.ok) c.why = "formula " + num(f.value) + ", path " + num(sim.value);
    return c;
}

}  // namespace

bool SelftestReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

std::string SelftestReport::text() const {
    std::ostringstream os;
    for (const auto& c : checks)
        os << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": ") << c.detail
           << "\n";
    os << (passed() ? "selftest passed" : "selftest FAILED") << "\n";
    return os.str();
}

SelftestReport run_selftest(unsigned threads) {
    const std::pair<const char*, std::function<Check()>> suites[] = {
        {"specfun.monotone", specfun_monotone},
        {"specfun.inverse_roundtrip", specfun_roundtrip},
        {"specfun.kummer_series", kummer_series},
        {"process.transition_moments", transition_moments},
        {"process.lower_bound", lower_bound_closed_forms},
        {"policy.threshold_identities", threshold_identities},
        {"channel.fcfs_and_staleness", channel_fcfs},
        {"simulation.thread_determinism", [threads] { return thread_determinism(threads); }},
        {"solver.short_solve", [threads] { return short_solve(threads); }},
        {"eval.discount_formula", [threads] { return discount_formula(threads); }},
    };
    SelftestReport rep;
    for (const auto& [name, fn] : suites) {
        SelftestCheck sc{name, false, {}};
        try {
            const Check c = fn();
            sc.passed = c.ok;
            sc.detail = c.why;
        } catch (const std::exception& e) {
            sc.detail = std::string("exception: ") + e.what();
        }
        rep.checks.push_back(sc);
    }
    return rep;
}

}  // namespace ousamp
