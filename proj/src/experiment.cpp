// SPDX-License-Identifier: Apache-2.0
#include "ousamp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ousamp/error.hpp"
#include "ousamp/eval.hpp"
#include "ousamp/random.hpp"
#include "ousamp/solver.hpp"

namespace ousamp {

using json = nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
    fail(ErrorCode::ConfigError, "config field '" + path + "': " + what);
}

std::string join(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

void reject_unknown(const json& obj, const std::string& path, std::set<std::string> allowed) {
    for (const auto& [k, _] : obj.items())
        if (!allowed.count(k)) field_error(join(path, k), "unknown field");
}

const json* member(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& object_at(const json& obj, const std::string& key, const std::string& path) {
    const json* m = member(obj, key);
    if (!m->is_object()) field_error(join(path, key), "expected an object");
    return *m;
}

std::optional<double> opt_number(const json& obj, const std::string& key, const std::string& path) {
    const json* m = member(obj, key);
    if (!m || m->is_null()) return std::nullopt;
    if (!m->is_number()) field_error(join(path, key), "expected a number");
    const double x = m->get<double>();
    if (!std::isfinite(x)) field_error(join(path, key), "must be finite");
    return x;
}

double number(const json& obj, const std::string& key, const std::string& path, double def) {
    return opt_number(obj, key, path).value_or(def);
}

std::size_t count(const json& obj, const std::string& key, const std::string& path,
                  std::size_t def, std::size_t min = 1) {
    const json* m = member(obj, key);
    if (!m || m->is_null()) return def;
    if (!m->is_number_integer() || (m->is_number_integer() && m->get<long long>() < 0))
        field_error(join(path, key), "expected a nonnegative integer");
    const auto v = m->get<std::uint64_t>();
    if (v < min) field_error(join(path, key), "must be at least " + std::to_string(min));
    return static_cast<std::size_t>(v);
}

void positive(std::optional<double> x, const std::string& path) {
    if (x && !(*x > 0.0)) field_error(path, "must be positive");
}

ServiceModel parse_service(const json& j, const std::string& path) {
    reject_unknown(j, path, {"kind", "params"});
    const json* k = member(j, "kind");
    if (!k || !k->is_string()) field_error(join(path, "kind"), "expected a string");
    const std::string kind = k->get<std::string>();
    static const json empty = json::object();
    const json* pm = member(j, "params");
    const std::string pp = join(path, "params");
    if (pm && !pm->is_object()) field_error(pp, "expected an object");
    const json& p = pm ? *pm : empty;

    ServiceModel m;
    if (kind == "constant") {
        reject_unknown(p, pp, {"value"});
        m = ServiceModel::constant(number(p, "value", pp, 1.0));
    } else if (kind == "exponential") {
        reject_unknown(p, pp, {"mean"});
        m = ServiceModel::exponential(number(p, "mean", pp, 1.0));
    } else if (kind == "gamma") {
        reject_unknown(p, pp, {"shape", "scale"});
        m = ServiceModel::gamma(number(p, "shape", pp, 1.0), number(p, "scale", pp, 1.0));
    } else if (kind == "lognormal") {
        reject_unknown(p, pp, {"alpha"});
        m = ServiceModel::lognormal_normalized(number(p, "alpha", pp, 1.0));
    } else {
        field_error(join(path, "kind"),
                    "unknown service kind '" + kind + "' (constant, exponential, gamma, lognormal)");
    }
    try {
        m.validate();
    } catch (const Error& e) {
        field_error(pp, e.what());
    }
    return m;
}

PolicyConfig parse_policy(const json& j, const std::string& path) {
    reject_unknown(j, path, {"kind", "params"});
    PolicyConfig pc;
    const json* k = member(j, "kind");
    if (k && !k->is_string()) field_error(join(path, "kind"), "expected a string");
    const std::string kind = k ? k->get<std::string>() : "solve";
    static const json empty = json::object();
    const json* pm = member(j, "params");
    const std::string pp = join(path, "params");
    if (pm && !pm->is_object()) field_error(pp, "expected an object");
    const json& p = pm ? *pm : empty;
    if (kind == "solve") {
        reject_unknown(p, pp, {});
        pc.kind = PolicyConfig::Kind::Solve;
    } else if (kind == "threshold") {
        reject_unknown(p, pp, {"beta", "v"});
        pc.kind = PolicyConfig::Kind::Threshold;
        pc.beta = opt_number(p, "beta", pp);
        pc.v = opt_number(p, "v", pp);
        if (pc.beta.has_value() == pc.v.has_value())
            field_error(pp, "threshold policy needs exactly one of 'beta' or 'v'");
        if (pc.v && *pc.v < 0.0) field_error(join(pp, "v"), "must be >= 0");
    } else if (kind == "zero_wait") {
        reject_unknown(p, pp, {});
        pc.kind = PolicyConfig::Kind::ZeroWait;
    } else if (kind == "periodic") {
        reject_unknown(p, pp, {"period"});
        pc.kind = PolicyConfig::Kind::Periodic;
        pc.period = opt_number(p, "period", pp);
        if (!pc.period) field_error(join(pp, "period"), "required");
        positive(pc.period, join(pp, "period"));
    } else {
        field_error(join(path, "kind"),
                    "unknown policy kind '" + kind + "' (solve, threshold, zero_wait, periodic)");
    }
    return pc;
}

std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

std::string fmt(double x) {
    if (!std::isfinite(x)) return std::isnan(x) ? "NaN" : (x > 0 ? "Inf" : "-Inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

ParallelOptions parallel_of(const SimSettings& s) {
    ParallelOptions p;
    p.threads = s.threads;
    return p;
}

SolverOptions solver_of(const SimSettings& s) {
    SolverOptions o;
    o.tol_rel = s.tol_rel;
    o.pilot_cycles = s.pilot_cycles;
    o.search_cycles = s.search_cycles;
    o.validation_cycles = s.validation_cycles;
    o.dt_override = s.dt_override;
    o.parallel = parallel_of(s);
    return o;
}

json solution_json(const PolicySolution& s) {
    json h = json::array();
    for (const auto& e : s.history)
        h.push_back({{"stage", e.stage},
                     {"beta", e.beta},
                     {"v", e.v},
                     {"residual", e.residual},
                     {"residual_se", e.residual_se},
                     {"ratio", e.ratio},
                     {"mean_duration", e.mean_duration}});
    return {{"beta", s.beta},
            {"v", s.v},
            {"residual", s.residual},
            {"ci_halfwidth", s.ci_halfwidth},
            {"n_cycles", s.n_cycles},
            {"mse_lower", s.mse_y},
            {"dt_idle", s.dt_idle},
            {"pilot_beta", s.pilot_beta},
            {"validation_mse", s.validation_ratio},
            {"validation_mse_se", s.validation_ratio_se},
            {"validation_residual", s.validation_residual},
            {"validation_residual_se", s.validation_residual_se},
            {"mean_duration", s.mean_duration},
            {"bracket_doublings", s.doublings},
            {"bracket_doublings_flagged", s.doublings_flagged},
            {"history", h}};
}

json record_header(const char* command, const ExperimentConfig& cfg) {
    return {{"command", command},
            {"config_hash", config_hash(cfg)},
            {"seed", cfg.seed()},
            {"config", json::parse(canonical_json(cfg))}};
}

}  // namespace

OuParams ExperimentConfig::process() const {
    if (!theta) fail(ErrorCode::ConfigError, "config field 'process.theta': required");
    if (!sigma) fail(ErrorCode::ConfigError, "config field 'process.sigma': required");
    OuParams p{*theta, mu, *sigma};
    try {
        p.validate();
    } catch (const Error& e) {
        fail(ErrorCode::ConfigError, std::string("config field 'process': ") + e.what());
    }
    return p;
}

std::uint64_t ExperimentConfig::seed() const {
    if (!sim.master_seed)
        fail(ErrorCode::ConfigError, "config field 'sim.master_seed': required (or pass --seed)");
    return *sim.master_seed;
}

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_col(text, e.byte);
        std::string msg = e.what();
        // drop the library's own "[json.exception...] parse error at line L, column C: " prefix
        if (const auto pos = msg.find("column"); pos != std::string::npos) {
            if (const auto colon = msg.find(": ", pos); colon != std::string::npos)
                msg = msg.substr(colon + 2);
        }
        fail(ErrorCode::ConfigError, "config:" + std::to_string(line) + ":" + std::to_string(col) +
                                         ": parse error: " + msg);
    }
    if (!j.is_object()) fail(ErrorCode::ConfigError, "config: top level must be an object");
    reject_unknown(j, "", {"process", "service", "noise", "policy", "sim", "sweep"});

    ExperimentConfig c;
    if (member(j, "process")) {
        const json& p = object_at(j, "process", "");
        reject_unknown(p, "process", {"theta", "mu", "sigma"});
        c.theta = opt_number(p, "theta", "process");
        c.mu = number(p, "mu", "process", 0.0);
        c.sigma = opt_number(p, "sigma", "process");
        positive(c.sigma, "process.sigma");
    }
    if (member(j, "service")) c.service = parse_service(object_at(j, "service", ""), "service");
    if (member(j, "noise")) {
        const json& n = object_at(j, "noise", "");
        reject_unknown(n, "noise", {"b1", "b2"});
        NoiseModel nm{number(n, "b1", "noise", 0.0), number(n, "b2", "noise", 0.0)};
        if (nm.b1 < 0.0) field_error("noise.b1", "must be >= 0");
        if (nm.b2 < 0.0) field_error("noise.b2", "must be >= 0");
        c.noise = nm;
    }
    if (member(j, "policy")) c.policy = parse_policy(object_at(j, "policy", ""), "policy");
    if (member(j, "sim")) {
        const json& s = object_at(j, "sim", "");
        reject_unknown(s, "sim",
                       {"dt_override", "n_cycles", "horizon", "master_seed", "threads", "tol_rel",
                        "pilot_cycles", "search_cycles", "validation_cycles", "discount_draws",
                        "trajectories"});
        auto& m = c.sim;
        m.dt_override = opt_number(s, "dt_override", "sim");
        positive(m.dt_override, "sim.dt_override");
        m.n_cycles = count(s, "n_cycles", "sim", m.n_cycles);
        m.horizon = opt_number(s, "horizon", "sim");
        positive(m.horizon, "sim.horizon");
        if (const json* seed = member(s, "master_seed"); seed && !seed->is_null()) {
            if (!seed->is_number_integer() || (seed->is_number_integer() && seed->get<long long>() < 0 &&
                                               !seed->is_number_unsigned()))
                field_error("sim.master_seed", "expected a nonnegative integer");
            m.master_seed = seed->get<std::uint64_t>();
        }
        m.threads = static_cast<unsigned>(count(s, "threads", "sim", 0, 0));
        m.tol_rel = number(s, "tol_rel", "sim", m.tol_rel);
        if (!(m.tol_rel > 0.0 && m.tol_rel < 1.0)) field_error("sim.tol_rel", "must lie in (0, 1)");
        m.pilot_cycles = count(s, "pilot_cycles", "sim", m.pilot_cycles, 100);
        m.search_cycles = count(s, "search_cycles", "sim", m.search_cycles, 100);
        m.validation_cycles = count(s, "validation_cycles", "sim", m.validation_cycles, 100);
        m.discount_draws = count(s, "discount_draws", "sim", m.discount_draws, 1000);
        m.trajectories = count(s, "trajectories", "sim", m.trajectories);
    }
    if (member(j, "sweep")) {
        const json& s = object_at(j, "sweep", "");
        reject_unknown(s, "sweep", {"variable", "values"});
        SweepSettings sw;
        if (const json* v = member(s, "variable")) {
            if (!v->is_string()) field_error("sweep.variable", "expected a string");
            sw.variable = v->get<std::string>();
        }
        if (sw.variable != "alpha") field_error("sweep.variable", "only 'alpha' is supported");
        if (const json* v = member(s, "values")) {
            if (!v->is_array() || v->empty()) field_error("sweep.values", "expected a nonempty array");
            for (std::size_t i = 0; i < v->size(); ++i) {
                const json& x = (*v)[i];
                const std::string path = "sweep.values[" + std::to_string(i) + "]";
                if (!x.is_number()) field_error(path, "expected a number");
                if (!(x.get<double>() > 0.0)) field_error(path, "must be positive");
                sw.values.push_back(x.get<double>());
            }
        }
        c.sweep = sw;
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string canonical_json(const ExperimentConfig& c) {
    json j;
    json proc = {{"mu", c.mu}};
    if (c.theta) proc["theta"] = *c.theta;
    if (c.sigma) proc["sigma"] = *c.sigma;
    j["process"] = proc;

    json sp;
    switch (c.service.kind) {
        case ServiceModel::Kind::Constant:
            j["service"] = {{"kind", "constant"}, {"params", {{"value", c.service.p1}}}};
            break;
        case ServiceModel::Kind::Exponential:
            j["service"] = {{"kind", "exponential"}, {"params", {{"mean", c.service.p1}}}};
            break;
        case ServiceModel::Kind::Gamma:
            j["service"] = {{"kind", "gamma"},
                            {"params", {{"shape", c.service.p1}, {"scale", c.service.p2}}}};
            break;
        case ServiceModel::Kind::LogNormalNormalized:
            j["service"] = {{"kind", "lognormal"}, {"params", {{"alpha", c.service.p1}}}};
            break;
    }
    if (c.noise) j["noise"] = {{"b1", c.noise->b1}, {"b2", c.noise->b2}};

    json pol;
    switch (c.policy.kind) {
        case PolicyConfig::Kind::Solve: pol = {{"kind", "solve"}}; break;
        case PolicyConfig::Kind::ZeroWait: pol = {{"kind", "zero_wait"}}; break;
        case PolicyConfig::Kind::Periodic:
            pol = {{"kind", "periodic"}, {"params", {{"period", *c.policy.period}}}};
            break;
        case PolicyConfig::Kind::Threshold:
            pol = {{"kind", "threshold"},
                   {"params", c.policy.beta ? json{{"beta", *c.policy.beta}} : json{{"v", *c.policy.v}}}};
            break;
    }
    j["policy"] = pol;

    const auto& s = c.sim;
    // threads is deliberately absent: results do not depend on it.
    j["sim"] = {{"n_cycles", s.n_cycles},
                {"tol_rel", s.tol_rel},
                {"pilot_cycles", s.pilot_cycles},
                {"search_cycles", s.search_cycles},
                {"validation_cycles", s.validation_cycles},
                {"discount_draws", s.discount_draws},
                {"trajectories", s.trajectories}};
    if (s.dt_override) j["sim"]["dt_override"] = *s.dt_override;
    if (s.horizon) j["sim"]["horizon"] = *s.horizon;
    if (s.master_seed) j["sim"]["master_seed"] = *s.master_seed;
    if (c.sweep) j["sweep"] = {{"variable", c.sweep->variable}, {"values", c.sweep->values}};
    return j.dump();
}

std::string config_hash(const ExperimentConfig& c) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_json(c)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string run_solve(const ExperimentConfig& cfg) {
    const OuParams p = cfg.process();
    json rec = record_header("solve", cfg);
    const auto sol = solve_beta(p, cfg.service, solver_of(cfg.sim), cfg.seed());
    rec["result"] = solution_json(sol);
    return rec.dump(2) + "\n";
}

std::string run_simulate(const ExperimentConfig& cfg) {
    const OuParams p = cfg.process();
    const std::uint64_t seed = cfg.seed();
    const NoiseModel noise = cfg.noise.value_or(NoiseModel{});
    json rec = record_header("simulate", cfg);

    PolicyKind policy = PolicyKind::zero_wait();
    std::optional<double> dt = cfg.sim.dt_override;
    switch (cfg.policy.kind) {
        case PolicyConfig::Kind::Solve: {
            const auto sol = solve_beta(p, cfg.service, solver_of(cfg.sim), hash_combine(seed, 1));
            rec["solution"] = solution_json(sol);
            policy = PolicyKind::optimal_threshold({sol.beta, sol.v});
            if (!dt) dt = sol.dt_idle;
            break;
        }
        case PolicyConfig::Kind::Threshold: {
            if (cfg.policy.v) {
                policy = PolicyKind::optimal_threshold({std::nan(""), *cfg.policy.v});
            } else {
                const double mse_y = mse_lower_bound(cfg.service, p, 1000000, hash_combine(seed, 2));
                const double beta = *cfg.policy.beta;
                policy = PolicyKind::optimal_threshold({beta, threshold_v(beta, p, mse_y)});
            }
            break;
        }
        case PolicyConfig::Kind::ZeroWait: break;
        case PolicyConfig::Kind::Periodic: policy = PolicyKind::periodic(*cfg.policy.period); break;
    }

    const auto sim_cfg = SimConfig::make(p, cfg.service, noise, policy, dt);
    ParallelOptions par = parallel_of(cfg.sim);
    json out;
    out["policy"] = policy.describe();
    if (policy.kind == PolicyKind::Kind::OptimalThreshold) out["v"] = policy.threshold.v;
    out["dt_idle"] = sim_cfg.grid.dt_idle;
    out["dt_busy"] = sim_cfg.grid.dt_busy;
    if (cfg.sim.horizon) {
        EvalOptions eo;
        eo.parallel = par;
        eo.trajectories = cfg.sim.trajectories;
        eo.dt_override = dt;
        const auto r = long_run_mse(policy, p, cfg.service, noise, *cfg.sim.horizon, hash_combine(seed, 3), eo);
        out["estimator"] = "time_average";
        out["horizon"] = *cfg.sim.horizon;
        out["cycles"] = r.cycles;
        out["mse"] = r.mse.value;
        out["mse_ci"] = stats::ci95(r.mse.std_error);
        out["mse_noisy"] = r.mse_noisy.value;
        out["mse_noisy_ci"] = stats::ci95(r.mse_noisy.std_error);
        out["noise_gap"] = r.noise_gap.value;
        out["noise_gap_ci"] = stats::ci95(r.noise_gap.std_error);
    } else {
        const auto cycles = run_cycles(sim_cfg, cfg.sim.n_cycles, hash_combine(seed, 3), par);
        std::vector<double> dur, err, noisy, disc;
        for (const auto& c : cycles) {
            dur.push_back(c.duration);
            err.push_back(c.err_integral);
            noisy.push_back(c.noisy_err_integral);
            disc.push_back(c.discount_integral);
        }
        const auto mse = stats::ratio_jackknife(err, dur, par.block);
        const auto mn = stats::ratio_jackknife(noisy, dur, par.block);
        const auto md = stats::mean_blocks(dur, par.block);
        const auto mdisc = stats::mean_blocks(disc, par.block);
        out["estimator"] = "cycle_ratio";
        out["cycles"] = cycles.size();
        out["mse"] = mse.value;
        out["mse_ci"] = stats::ci95(mse.std_error);
        out["mse_noisy"] = mn.value;
        out["mse_noisy_ci"] = stats::ci95(mn.std_error);
        out["mean_duration"] = md.value;
        out["mean_duration_ci"] = stats::ci95(md.std_error);
        out["mean_discount_integral"] = mdisc.value;
        out["mean_discount_integral_ci"] = stats::ci95(mdisc.std_error);
    }
    out["mse_lower"] = mse_lower_bound(cfg.service, p, 1000000, hash_combine(seed, 2));
    rec["result"] = out;
    return rec.dump(2) + "\n";
}

const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> cols = {
        "alpha",          "beta",           "v",
        "mse_lower",      "mse_no_noise",   "mse_noise_sim",
        "mse_upper",      "ci_beta",        "ci_mse_no_noise",
        "ci_mse_noise_sim", "ci_mse_upper", "noise_term",
        "ci_noise_term",  "status",         "config_hash",
        "seed"};
    return cols;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

}  // namespace

SweepOutput run_sweep_fig2(const ExperimentConfig& in) {
    ExperimentConfig cfg = in;
    if (!cfg.theta) cfg.theta = 0.5;
    if (!cfg.sigma) cfg.sigma = 1.0;
    if (!cfg.noise) cfg.noise = NoiseModel{0.1, 0.1};
    if (!cfg.sweep) cfg.sweep = SweepSettings{};
    if (cfg.sweep->values.empty())
        for (int k = 1; k <= 8; ++k) cfg.sweep->values.push_back(0.2 * k);
    cfg.service = ServiceModel::lognormal_normalized(cfg.sweep->values.front());

    const OuParams p = cfg.process();
    const std::uint64_t seed = cfg.seed();
    // Hash of the configuration as supplied, matching the other commands.
    const std::string hash = config_hash(in);
    const std::string seed_s = std::to_string(seed);

    SweepOutput out;
    const auto& cols = sweep_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out.csv += (i ? "," : "") + cols[i];
    out.csv += "\r\n";
    out.dat = "# config_hash=" + hash + " seed=" + seed_s + "\n# ";
    for (std::size_t i = 0; i + 3 < cols.size(); ++i) out.dat += (i ? " " : "") + cols[i];
    out.dat += "\n";

    BoundOptions bo;
    bo.cycles = cfg.sim.n_cycles;
    bo.discount_draws = cfg.sim.discount_draws;
    bo.long_run_cycles = cfg.sim.n_cycles;
    bo.eval.parallel = parallel_of(cfg.sim);
    bo.eval.trajectories = cfg.sim.trajectories;
    bo.eval.dt_override = cfg.sim.dt_override;

    for (std::size_t i = 0; i < cfg.sweep->values.size(); ++i) {
        const double alpha = cfg.sweep->values[i];
        std::vector<std::string> row(cols.size());
        row[0] = fmt(alpha);
        std::string status = "ok";
        try {
            const auto service = ServiceModel::lognormal_normalized(alpha);
            const auto sol = solve_beta(p, service, solver_of(cfg.sim), hash_combine(seed, 2 * i));
            const auto rep = mse_upper_bound(sol, p, service, *cfg.noise, hash_combine(seed, 2 * i + 1), bo);
            const double vals[] = {sol.beta,         sol.v,
                                   rep.mse_lower,    rep.mse_no_noise,
                                   rep.mse_with_noise_sim, rep.mse_upper_formula,
                                   sol.ci_halfwidth, rep.ci_mse_no_noise,
                                   rep.ci_mse_with_noise_sim, rep.ci_mse_upper_formula,
                                   rep.noise_term,   rep.ci_noise_term};
            for (std::size_t k = 0; k < std::size(vals); ++k) row[k + 1] = fmt(vals[k]);
        } catch (const Error& e) {
            status = std::string("error:") + to_string(e.code()) + ": " + e.what();
            std::replace(status.begin(), status.end(), '\n', ' ');
            for (std::size_t k = 1; k + 3 < cols.size(); ++k) row[k] = "";
            ++out.failed_rows;
        }
        row[cols.size() - 3] = status;
        row[cols.size() - 2] = hash;
        row[cols.size() - 1] = seed_s;

        for (std::size_t k = 0; k < row.size(); ++k) out.csv += (k ? "," : "") + csv_field(row[k]);
        out.csv += "\r\n";
        if (status == "ok") {
            for (std::size_t k = 0; k + 3 < row.size(); ++k) out.dat += (k ? " " : "") + row[k];
        } else {
            out.dat += "# alpha=" + row[0] + " " + status;
        }
        out.dat += "\n";
    }
    return out;
}

}  // namespace ousamp
