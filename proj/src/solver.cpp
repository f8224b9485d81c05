// SPDX-License-Identifier: Apache-2.0
#include "ousamp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ousamp/error.hpp"
#include "ousamp/random.hpp"

namespace ousamp {

std::vector<CycleRecord> simulate_cycles(const PolicyKind& policy, const OuParams& params,
                                         const ServiceModel& service, std::size_t n,
                                         std::uint64_t seed, const ParallelOptions& opt,
                                         std::optional<double> dt_override) {
    const auto cfg = SimConfig::make(params, service, NoiseModel{}, policy, dt_override);
    return run_cycles(cfg, n, seed, opt);
}

stats::Estimate beta_residual(double beta, std::span<const CycleRecord> cycles,
                              std::size_t block) {
    std::vector<double> r(cycles.size());
    for (std::size_t i = 0; i < cycles.size(); ++i)
        r[i] = cycles[i].err_integral_cmc - beta * cycles[i].duration_cmc;
    return stats::mean_blocks(r, block);
}

stats::Estimate cycle_ratio(std::span<const CycleRecord> cycles, std::size_t block) {
    std::vector<double> num(cycles.size()), den(cycles.size());
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        num[i] = cycles[i].err_integral_cmc;
        den[i] = cycles[i].duration_cmc;
    }
    return stats::ratio_jackknife(num, den, block);
}

namespace {

class ResidualOracle {
public:
    ResidualOracle(const OuParams& params, const ServiceModel& service, double mse_y,
                   const SolverOptions& opt, PolicySolution& sol)
        : params_(params), service_(service), mse_y_(mse_y), opt_(opt), sol_(sol) {}

    /// dt = nullopt applies the detection rule at v(beta).
    ResidualEval operator()(const char* stage, double beta, std::size_t n, std::uint64_t seed,
                            std::optional<double> dt) {
        ResidualEval ev;
        ev.stage = stage;
        ev.beta = beta;
        ev.v = threshold_v(beta, params_, mse_y_);
        const auto policy = PolicyKind::optimal_threshold({beta, ev.v});
        const auto cycles = simulate_cycles(policy, params_, service_, n, seed, opt_.parallel, dt);
        const auto res = beta_residual(beta, cycles, opt_.parallel.block);
        const auto ratio = cycle_ratio(cycles, opt_.parallel.block);
        double dur = 0.0;
        for (const auto& c : cycles) dur += c.duration;
        ev.residual = res.value;
        ev.residual_se = res.std_error;
        ev.ratio = ratio.value;
        ev.ratio_se = ratio.std_error;
        ev.mean_duration = dur / static_cast<double>(cycles.size());
        sol_.n_cycles += cycles.size();
        sol_.history.push_back(ev);
        return ev;
    }

private:
    OuParams params_;
    ServiceModel service_;
    double mse_y_;
    const SolverOptions& opt_;
    PolicySolution& sol_;
};

std::string format_history(const std::vector<ResidualEval>& h) {
    std::ostringstream os;
    os.precision(8);
    for (const auto& e : h)
        os << "\n  [" << e.stage << "] beta=" << e.beta << " v=" << e.v << " residual=" << e.residual
           << " se=" << e.residual_se;
    return os.str();
}

[[noreturn]] void bracket_failure(const std::string& why, const ResidualEval& lo,
                                  const ResidualEval& hi) {
    std::ostringstream os;
    os.precision(10);
    os << "no sign change for beta root: " << why << "; residual(" << lo.beta << ")=" << lo.residual
       << ", residual(" << hi.beta << ")=" << hi.residual;
    fail(ErrorCode::BracketFailure, os.str());
}

// With common random numbers the residual must be nonincreasing in beta up
// to noise; anything else means the search is not trustworthy.
void check_monotone(std::vector<ResidualEval> evals, const std::vector<ResidualEval>& all) {
    std::sort(evals.begin(), evals.end(),
              [](const ResidualEval& a, const ResidualEval& b) { return a.beta < b.beta; });
    for (std::size_t k = 1; k < evals.size(); ++k) {
        const double tol = 3.0 * std::hypot(evals[k].residual_se, evals[k - 1].residual_se);
        if (evals[k].residual > evals[k - 1].residual + tol) {
            fail(ErrorCode::NonConvergence,
                 "residual increased with beta beyond noise on the common-random-number path:" +
                     format_history(all));
        }
    }
}

}  // namespace

PolicySolution solve_beta(const OuParams& params, const ServiceModel& service,
                          const SolverOptions& opt, std::uint64_t seed) {
    params.validate();
    service.validate();
    if (!(opt.tol_rel > 0.0)) fail(ErrorCode::DomainError, "tol_rel must be positive");

    PolicySolution sol;
    const double mse_y = mse_lower_bound(service, params, opt.mse_y_draws, hash_combine(seed, 0x11));
    if (!std::isfinite(mse_y)) {
        fail(ErrorCode::DomainError,
             "the lower bound E[gap_variance(Y)] is infinite for " + service.describe() +
                 " with theta=" + std::to_string(params.theta) +
                 " (E[exp(2|theta| Y)] diverges); no finite optimal cost exists");
    }
    sol.mse_y = mse_y;
    ResidualOracle eval(params, service, mse_y, opt, sol);

    const bool stable = params.regime() == OuParams::Regime::Stable;
    const double cap = stable ? params.stationary_scale() * (1.0 - 1e-6) : 0.0;
    auto new_hi = [&](double lo, double step) { return stable ? std::min(lo + step, cap) : lo + step; };

    // Pilot: cheap bisection with the detection rule applied at each beta.
    const std::uint64_t pilot_seed = hash_combine(seed, 0x21);
    double lo = mse_y;
    double hi = 0.0;
    double step = std::max(mse_y, 1e-3 * params.sigma * params.sigma * service.mean());
    if (stable) {
        hi = cap;
    } else {
        hi = lo + step;
        ResidualEval e = eval("pilot", hi, opt.pilot_cycles, pilot_seed, std::nullopt);
        while (e.residual >= 0.0) {
            if (++sol.doublings > opt.max_doublings)
                bracket_failure("upper bracket doubling limit reached", e, e);
            lo = hi;
            step *= 2.0;
            hi = lo + step;
            e = eval("pilot", hi, opt.pilot_cycles, pilot_seed, std::nullopt);
        }
    }
    ResidualEval last{};
    for (int it = 0; it < opt.max_iterations && hi - lo > 0.02 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        last = eval("pilot", mid, opt.pilot_cycles, pilot_seed, std::nullopt);
        (last.residual >= 0.0 ? lo : hi) = mid;
    }
    const double beta_pilot = 0.5 * (lo + hi);
    if (stable && beta_pilot >= cap * (1.0 - 1e-3)) {
        ResidualEval top = last;
        bracket_failure("residual stays positive up to sigma^2/(2 theta)", top, top);
    }
    sol.pilot_beta = beta_pilot;

    // Search: fixed grid and fixed seed, so the residual is one sample-average
    // function of beta.
    const double v_pilot = threshold_v(beta_pilot, params, mse_y);
    double dt = opt.dt_override.value_or(detection_step(0.8 * v_pilot, params.sigma));
    if (!opt.dt_override) dt = std::min(dt, default_busy_step(params, service));
    if (!(dt > 0.0)) dt = default_busy_step(params, service);
    sol.dt_idle = dt;
    const std::uint64_t search_seed = hash_combine(seed, 0x31);
    const std::size_t first_search = sol.history.size();

    double se_beta = last.mean_duration > 0.0 ? last.residual_se / last.mean_duration : 0.0;
    double w = std::max(0.05 * beta_pilot, 4.0 * se_beta);
    lo = std::max(mse_y, beta_pilot - w);
    hi = new_hi(beta_pilot, w);
    ResidualEval e_lo = eval("search", lo, opt.search_cycles, search_seed, dt);
    ResidualEval e_hi = (stable && hi >= cap) ? ResidualEval{"search", hi, 0, -1.0, 0, 0, 0, 0}
                                              : eval("search", hi, opt.search_cycles, search_seed, dt);
    while (e_lo.residual < 0.0) {
        if (lo <= mse_y) bracket_failure("residual negative at the lower bound mse_y", e_lo, e_hi);
        hi = lo;
        e_hi = e_lo;
        w *= 2.0;
        lo = std::max(mse_y, lo - w);
        e_lo = eval("search", lo, opt.search_cycles, search_seed, dt);
    }
    while (e_hi.residual >= 0.0) {
        if (stable && hi >= cap) bracket_failure("residual positive at sigma^2/(2 theta)", e_lo, e_hi);
        if (++sol.doublings > opt.max_doublings) bracket_failure("doubling limit reached", e_lo, e_hi);
        lo = hi;
        e_lo = e_hi;
        w *= 2.0;
        hi = new_hi(lo, w);
        e_hi = (stable && hi >= cap) ? ResidualEval{"search", hi, 0, -1.0, 0, 0, 0, 0}
                                     : eval("search", hi, opt.search_cycles, search_seed, dt);
    }
    sol.doublings_flagged = sol.doublings > 20;

    ResidualEval root{};
    bool done = false;
    for (int it = 0; it < opt.max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        root = eval("search", mid, opt.search_cycles, search_seed, dt);
        const bool narrow = hi - lo <= opt.tol_rel * mid;
        const bool small = std::abs(root.residual) <= std::max(opt.tol_abs, opt.tol_rel * mid);
        const bool noise_level = std::abs(root.residual) <= std::max(opt.tol_abs, 2.0 * root.residual_se);
        if ((narrow && small && noise_level) || (narrow && hi - lo <= 1e-12 * mid && noise_level)) {
            done = true;
            break;
        }
        (root.residual >= 0.0 ? lo : hi) = mid;
    }
    check_monotone({sol.history.begin() + static_cast<std::ptrdiff_t>(first_search), sol.history.end()},
                   sol.history);
    if (!done)
        fail(ErrorCode::NonConvergence, "bisection did not meet its tolerances:" + format_history(sol.history));

    sol.beta = root.beta;
    sol.v = root.v;
    sol.residual = root.residual;

    const ResidualEval val =
        eval("validation", sol.beta, opt.validation_cycles, hash_combine(seed, 0x41), dt);
    sol.validation_ratio = val.ratio;
    sol.validation_ratio_se = val.ratio_se;
    sol.validation_residual = val.residual;
    sol.validation_residual_se = val.residual_se;
    sol.mean_duration = val.mean_duration;
    sol.ci_halfwidth = stats::ci95(val.ratio_se);
    return sol;
}

}  // namespace ousamp
