// bernwf: batch front-end for the Lambda-Wright-Fisher / Bernstein-dual
// simulation and verification toolkit.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bernwf/analysis.hpp"
#include "bernwf/config_io.hpp"
#include "bernwf/dual.hpp"
#include "bernwf/forward.hpp"
#include "bernwf/moran.hpp"
#include "bernwf/version.hpp"

namespace {

using bernwf::Estimate;
using nlohmann::json;

struct CommonOpts {
    std::string config_path;
    std::uint64_t seed = 1;
    std::size_t replicas = 10000;
    std::string out;
    std::string format = "json";
    bool force = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "model config file (JSON)")->required();
    cmd->add_option("--seed", opts.seed, "master RNG seed");
    cmd->add_option("--replicas", opts.replicas, "Monte Carlo replicas");
    cmd->add_option("--out", opts.out, "output path (default: stdout)");
    cmd->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

std::string timestamp_now() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json finite_or_string(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

json estimate_json(const Estimate& e) {
    return {{"mean", e.mean}, {"se", e.se}, {"ci_lo", e.lo()}, {"ci_hi", e.hi()}, {"n", e.n}};
}

json record_base(const std::string& command, const json& config, std::uint64_t seed) {
    json rec;
    rec["command"] = command;
    rec["version"] = bernwf::kVersion;
    rec["timestamp"] = timestamp_now();
    rec["seed"] = seed;
    rec["config"] = config;
    rec["config_hash"] = bernwf::config_hash(config);
    return rec;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text << "\n";
}

void emit_record(const json& rec, const CommonOpts& opts) { emit(rec.dump(2), opts.out); }

bernwf::CoefficientVector parse_vector(const std::string& csv) {
    bernwf::CoefficientVector v;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
    if (v.empty()) throw CLI::ValidationError("--v", "empty coefficient list");
    return v;
}

std::string serialize_vector(const bernwf::CoefficientVector& v, std::size_t cap = 9) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size() && i < cap; ++i) {
        if (i) os << ";";
        os << v[i];
    }
    if (v.size() > cap) os << ";...";
    return os.str();
}

bernwf::CoefficientVector unit_vector(int n) {
    bernwf::CoefficientVector e(static_cast<std::size_t>(n) + 1, 0.0);
    e.back() = 1.0;
    return e;
}

// ---------------------------------------------------------------------------

int cmd_check(const CommonOpts& opts, int lyap_n_hi) {
    bernwf::ModelParams params = bernwf::model_from_file(opts.config_path);
    json config = bernwf::model_to_json(params);
    json rec = record_base("check", config, opts.seed);

    bernwf::AssumptionReport rep = bernwf::check_assumption(params);
    rec["assumption"] = {{"b", rep.branch_intensity},
                         {"c", finite_or_string(rep.coalescence_strength)},
                         {"mu_mass", rep.mu_mass},
                         {"nu_mass", rep.nu_mass},
                         {"theta", rep.theta},
                         {"verdict", rep.holds}};
    if (params.lambda0 > 0.0 || !params.lambda_tail.empty()) {
        bernwf::LyapunovReport lyap = bernwf::lyapunov_report(params, 1, lyap_n_hi);
        json rows = json::array();
        for (const auto& r : lyap.rows) rows.push_back({r.n, r.delta, r.f, r.drift});
        rec["lyapunov"] = {{"columns", {"n", "delta", "f", "drift"}},
                           {"rows", rows},
                           {"onset", lyap.onset ? json(*lyap.onset) : json()}};
    }
    rec["verdict"] = rep.holds;
    if (opts.format == "csv") {
        std::ostringstream csv;
        csv << "n,delta,f,drift\n";
        if (rec.contains("lyapunov"))
            for (const auto& r : rec["lyapunov"]["rows"])
                csv << r[0] << "," << r[1] << "," << r[2] << "," << r[3] << "\n";
        emit(csv.str(), opts.out);
    } else {
        emit_record(rec, opts);
    }
    return rep.holds ? 0 : 1;
}

int cmd_simulate_forward(const CommonOpts& opts, double x0, double t, double dt, int n_max) {
    bernwf::ModelParams params = bernwf::model_from_file(opts.config_path);
    bernwf::ForwardConfig cfg;
    cfg.x0 = x0;
    cfg.t_end = t;
    cfg.dt = dt;
    if (opts.format == "csv") {
        bernwf::Rng rng = bernwf::make_rng(opts.seed, 0);
        bernwf::ForwardPath path = bernwf::simulate_path(cfg, params, rng);
        std::ostringstream csv;
        csv << "t,x\n";
        for (std::size_t i = 0; i < path.times.size(); ++i)
            csv << path.times[i] << "," << path.values[i] << "\n";
        emit(csv.str(), opts.out);
        return 0;
    }
    json rec = record_base("simulate-forward", bernwf::model_to_json(params), opts.seed);
    rec["x0"] = x0;
    rec["t"] = t;
    rec["dt"] = dt;
    json moments = json::array();
    for (int k = 1; k <= n_max; ++k) {
        Estimate e = bernwf::moment_estimate(cfg, params, k, opts.replicas,
                                             bernwf::derive_seed(opts.seed, 40 + k));
        moments.push_back({{"k", k}, {"estimate", estimate_json(e)}});
    }
    rec["moments"] = moments;
    emit_record(rec, opts);
    return 0;
}

int cmd_simulate_dual(const CommonOpts& opts, const std::string& v_csv, double t, int l_max) {
    bernwf::ModelParams params = bernwf::model_from_file(opts.config_path);
    bernwf::CoefficientVector v0 = parse_vector(v_csv);
    bernwf::DualSimOptions sim;
    sim.l_max = l_max;
    sim.env_mc_se_budget = 0.01;
    if (opts.format == "csv") {
        bernwf::Rng rng = bernwf::make_rng(opts.seed, 0);
        std::ostringstream csv;
        csv << "t,L,label,event_kind,v\n";
        csv << 0.0 << "," << v0.size() - 1 << ",a,init," << serialize_vector(v0) << "\n";
        bernwf::simulate_until(params, v0, t, sim, rng,
                               [&csv](const bernwf::DualState& s, const bernwf::DualEvent& ev) {
                                   csv << s.clock << "," << s.lines() << ","
                                       << bernwf::allele_char(s.label) << ","
                                       << bernwf::to_string(ev.kind) << ","
                                       << serialize_vector(s.v) << "\n";
                               });
        emit(csv.str(), opts.out);
        return 0;
    }
    json rec = record_base("simulate-dual", bernwf::model_to_json(params), opts.seed);
    rec["v0"] = v0;
    rec["t"] = t;
    std::size_t absorbed = 0;
    std::vector<double> absorb_values;
    bernwf::DualEventCounts totals;
    for (std::size_t rep = 0; rep < opts.replicas; ++rep) {
        bernwf::Rng rng = bernwf::make_rng(opts.seed, rep);
        bernwf::DualPathSummary sum = bernwf::simulate_until(params, v0, t, sim, rng);
        if (sum.absorbed) {
            ++absorbed;
            absorb_values.push_back(sum.final_value);
        }
        totals.coalesce += sum.counts.coalesce;
        totals.select += sum.counts.select;
        totals.mut_a += sum.counts.mut_a;
        totals.mut_A += sum.counts.mut_A;
        totals.env_a += sum.counts.env_a;
        totals.env_A += sum.counts.env_A;
    }
    rec["absorbed_fraction"] =
        static_cast<double>(absorbed) / static_cast<double>(opts.replicas);
    if (!absorb_values.empty())
        rec["absorbed_value"] = estimate_json(bernwf::mean_estimate(absorb_values));
    rec["event_counts"] = {{"coalesce", totals.coalesce}, {"select", totals.select},
                           {"mut_a", totals.mut_a},       {"mut_A", totals.mut_A},
                           {"env_a", totals.env_a},       {"env_A", totals.env_A}};
    emit_record(rec, opts);
    return 0;
}

int cmd_moran(const CommonOpts& opts, int K, double x0, double t, bool has_t, int n_max) {
    bernwf::ModelParams params = bernwf::model_from_file(opts.config_path);
    json rec = record_base("moran", bernwf::model_to_json(params), opts.seed);
    rec["K"] = K;
    rec["x0"] = x0;
    if (has_t) {
        auto rows = bernwf::moran_vs_sde(params, K, x0, t, n_max, opts.replicas, opts.seed);
        json jr = json::array();
        bool ok = true;
        for (const auto& r : rows) {
            jr.push_back({{"k", r.k},
                          {"moran", estimate_json(r.moran)},
                          {"sde", estimate_json(r.sde)},
                          {"z", r.z}});
            ok = ok && std::abs(r.z) <= 3.0;
        }
        rec["t"] = t;
        rec["comparison"] = jr;
        rec["verdict"] = ok;
        if (opts.format == "csv") {
            std::ostringstream csv;
            csv << "k,moran_mean,moran_se,sde_mean,sde_se,z\n";
            for (const auto& r : rows)
                csv << r.k << "," << r.moran.mean << "," << r.moran.se << "," << r.sde.mean << ","
                    << r.sde.se << "," << r.z << "\n";
            emit(csv.str(), opts.out);
        } else {
            emit_record(rec, opts);
        }
        return ok ? 0 : 1;
    }
    int i0 = static_cast<int>(std::lround(x0 * K));
    bernwf::MoranFixation fix = bernwf::moran_fixation(params, K, i0, opts.replicas, opts.seed);
    rec["i0"] = i0;
    rec["fixed_at_K"] = estimate_json(fix.fixed_at_K);
    rec["mean_events"] = fix.mean_events;
    emit_record(rec, opts);
    return 0;
}

int cmd_duality(const CommonOpts& opts, std::vector<double> ts, std::vector<double> xs,
                const std::string& v_csv, double dt) {
    bernwf::ModelParams params = bernwf::model_from_file(opts.config_path);
    if (ts.empty()) ts = {0.1, 0.5, 1.0};
    if (xs.empty()) xs = {0.2, 0.5, 0.8};
    std::sort(ts.begin(), ts.end());
    std::vector<bernwf::CoefficientVector> vs;
    if (!v_csv.empty())
        vs.push_back(parse_vector(v_csv));
    else
        vs = {unit_vector(1), unit_vector(2)};

    bernwf::DualityOptions dopts;
    dopts.dt = dt;
    auto cells = bernwf::duality_grid(params, xs, ts, vs, opts.replicas, opts.seed, dopts);
    int excursions = 0;
    double max_abs_z = 0.0;
    json jcells = json::array();
    for (const auto& c : cells) {
        if (std::abs(c.z) > 3.0) ++excursions;
        max_abs_z = std::max(max_abs_z, std::abs(c.z));
        jcells.push_back({{"x", c.x},
                          {"t", c.t},
                          {"v", vs[c.v_index]},
                          {"lhs", estimate_json(c.lhs)},
                          {"rhs", estimate_json(c.rhs)},
                          {"z", c.z}});
    }
    // generator-level residual on seeded random coefficient vectors
    double max_resid = 0.0;
    int instances = 0;
    bernwf::Rng wrng = bernwf::make_rng(bernwf::derive_seed(opts.seed, 777), 0);
    for (int rep = 0; rep < 10; ++rep) {
        int dim = 2 + rep % 6;
        bernwf::CoefficientVector w(static_cast<std::size_t>(dim));
        for (double& e : w) e = bernwf::uniform01(wrng);
        for (int xi = 0; xi <= 10; ++xi) {
            max_resid = std::max(max_resid, bernwf::generator_residual(params, xi / 10.0, w));
            ++instances;
        }
    }
    bool verdict = excursions <= 1 && max_resid <= 1e-10;

    json rec = record_base("duality", bernwf::model_to_json(params), opts.seed);
    rec["cells"] = jcells;
    rec["excursions"] = excursions;
    rec["max_abs_z"] = max_abs_z;
    rec["generator"] = {{"instances", instances}, {"max_residual", max_resid}};
    rec["verdict"] = verdict;
    if (opts.format == "csv") {
        std::ostringstream csv;
        csv << "x,t,v,lhs_mean,lhs_se,rhs_mean,rhs_se,z\n";
        for (const auto& c : cells)
            csv << c.x << "," << c.t << "," << serialize_vector(vs[c.v_index]) << "," << c.lhs.mean
                << "," << c.lhs.se << "," << c.rhs.mean << "," << c.rhs.se << "," << c.z << "\n";
        emit(csv.str(), opts.out);
    } else {
        emit_record(rec, opts);
    }
    return verdict ? 0 : 1;
}

int cmd_fixation(const CommonOpts& opts, double x, double horizon) {
    bernwf::ModelParams params = bernwf::model_from_file(opts.config_path);
    if (!bernwf::check_assumption(params).holds && !opts.force) {
        std::cerr << "fixation: rate-balance condition fails; rerun with --force to override\n";
        return 2;
    }
    bernwf::FixationOptions fopts;
    fopts.horizon = horizon;
    fopts.seed = opts.seed;
    fopts.forward_reps = opts.replicas;
    fopts.dual.force = opts.force;
    bernwf::FixationResult res = bernwf::fixation_probability(params, x, fopts);
    json rec = record_base("fixation", bernwf::model_to_json(params), opts.seed);
    rec["x"] = x;
    rec["dual_estimate"] = estimate_json(res.dual_estimate);
    bool ok = true;
    if (res.forward) {
        rec["forward_fixed_fraction"] = estimate_json(res.forward->fixed_at_one);
        rec["forward_unresolved"] = res.forward->unresolved;
        double denom = std::sqrt(res.dual_estimate.se * res.dual_estimate.se +
                                 res.forward->fixed_at_one.se * res.forward->fixed_at_one.se);
        double z = denom > 0.0
                       ? (res.dual_estimate.mean - res.forward->fixed_at_one.mean) / denom
                       : 0.0;
        rec["z"] = z;
        ok = std::abs(z) <= 3.0;
    }
    rec["verdict"] = ok;
    emit_record(rec, opts);
    return ok ? 0 : 1;
}

int cmd_moments(const CommonOpts& opts, int n_max) {
    bernwf::ModelParams params = bernwf::model_from_file(opts.config_path);
    if (!bernwf::check_assumption(params).holds && !opts.force) {
        std::cerr << "moments: rate-balance condition fails; rerun with --force to override\n";
        return 2;
    }
    bernwf::DualSimOptions sim;
    sim.env_mc_se_budget = 0.01;
    sim.force = opts.force;
    bernwf::MomentTable table =
        bernwf::stationary_moments(params, n_max, opts.replicas, opts.seed, sim);
    json rec = record_base("moments", bernwf::model_to_json(params), opts.seed);
    json rows = json::array();
    bool monotone = true;
    for (int n = 0; n <= table.max_n(); ++n) {
        const Estimate& e = table.rho[static_cast<std::size_t>(n)];
        rows.push_back({{"n", n}, {"rho", estimate_json(e)}});
        if (n > 0) {
            const Estimate& prev = table.rho[static_cast<std::size_t>(n - 1)];
            double slack = 3.0 * std::sqrt(prev.se * prev.se + e.se * e.se);
            monotone = monotone && e.mean <= prev.mean + slack;
        }
    }
    rec["rho"] = rows;
    rec["monotone_within_3se"] = monotone;

    // cross-check a non-unit start against the moment expansion
    if (table.max_n() >= 2) {
        bernwf::Rng vr = bernwf::make_rng(bernwf::derive_seed(opts.seed, 99), 0);
        bernwf::CoefficientVector v(3);
        for (double& e : v) e = bernwf::uniform01(vr);
        Estimate formula = bernwf::expected_absorbed_value(v, table);
        std::vector<double> vals(opts.replicas);
        for (std::size_t rep = 0; rep < opts.replicas; ++rep) {
            bernwf::Rng rng = bernwf::make_rng(bernwf::derive_seed(opts.seed, 98), rep);
            vals[rep] = bernwf::simulate_until(params, v, 1e9, sim, rng).final_value;
        }
        Estimate direct = bernwf::mean_estimate(vals);
        double z = bernwf::z_score(formula, direct);
        rec["cross_check"] = {{"v", v},
                              {"formula", estimate_json(formula)},
                              {"direct", estimate_json(direct)},
                              {"z", z}};
        monotone = monotone && std::abs(z) <= 3.0;
    }
    rec["verdict"] = monotone;
    if (opts.format == "csv") {
        std::ostringstream csv;
        csv << "n,rho_mean,rho_se\n";
        for (int n = 0; n <= table.max_n(); ++n)
            csv << n << "," << table.rho[static_cast<std::size_t>(n)].mean << ","
                << table.rho[static_cast<std::size_t>(n)].se << "\n";
        emit(csv.str(), opts.out);
    } else {
        emit_record(rec, opts);
    }
    return monotone ? 0 : 1;
}

int cmd_recursion(const CommonOpts& opts, int n_max) {
    bernwf::ModelParams params = bernwf::model_from_file(opts.config_path);
    if (!bernwf::check_assumption(params).holds && !opts.force) {
        std::cerr << "recursion: rate-balance condition fails; rerun with --force to override\n";
        return 2;
    }
    int kappa = params.sel.kappa;
    int table_n = std::max(n_max + kappa - 1, 2 * n_max);
    bernwf::DualSimOptions sim;
    sim.env_mc_se_budget = 0.01;
    sim.force = opts.force;
    bernwf::MomentTable table =
        bernwf::stationary_moments(params, table_n, opts.replicas, opts.seed, sim);
    json rec = record_base("recursion", bernwf::model_to_json(params), opts.seed);
    json rows = json::array();
    bool ok = true;
    for (int n = 1; n <= n_max; ++n) {
        bernwf::RecursionResidual rr = bernwf::recursion_residual(params, n, table);
        rows.push_back(
            {{"n", n}, {"residual", rr.residual}, {"se", rr.se}, {"ci_scaled", rr.ci_scaled}});
        ok = ok && rr.ci_scaled <= 3.0;
    }
    rec["residuals"] = rows;
    rec["upper_limit_convention"] = "max(n+kappa-1, 2n)";
    rec["verdict"] = ok;
    if (opts.format == "csv") {
        std::ostringstream csv;
        csv << "n,residual,se,ci_scaled\n";
        for (const auto& r : rows)
            csv << r["n"] << "," << r["residual"] << "," << r["se"] << "," << r["ci_scaled"]
                << "\n";
        emit(csv.str(), opts.out);
    } else {
        emit_record(rec, opts);
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lambda-Wright-Fisher simulation and Bernstein-duality verification"};
    app.require_subcommand(1);

    CommonOpts common;
    double x0 = 0.5, t = 1.0, dt = 1e-3, horizon = 2000.0;
    int n_max = 5, l_max = 10000, K = 100;
    std::string v_csv;
    std::vector<double> ts, xs;

    CLI::App* check = app.add_subcommand("check", "validate config, rate-balance report, Lyapunov table");
    add_common(check, common);
    int lyap_hi = 100;
    check->add_option("--n-max", lyap_hi, "Lyapunov table upper bound");

    CLI::App* fwd = app.add_subcommand("simulate-forward", "simulate the forward jump diffusion");
    add_common(fwd, common);
    fwd->add_option("--x0", x0, "initial frequency");
    fwd->add_option("--t", t, "time horizon");
    fwd->add_option("--dt", dt, "Euler step");
    fwd->add_option("--n-max", n_max, "highest moment in the JSON summary");

    CLI::App* dual = app.add_subcommand("simulate-dual", "simulate the Bernstein coefficient process");
    add_common(dual, common);
    dual->add_option("--v", v_csv, "initial coefficients, comma separated")->default_val("0,1");
    dual->add_option("--t", t, "time horizon");
    dual->add_option("--l-max", l_max, "explosion guard on the line count");

    CLI::App* moran = app.add_subcommand("moran", "finite-population Moran counterpart");
    add_common(moran, common);
    moran->add_option("--k", K, "population size")->required();
    moran->add_option("--x0", x0, "initial frequency");
    CLI::Option* topt = moran->add_option("--t", t, "compare moments at this SDE time (omit for fixation)");
    moran->add_option("--n-max", n_max, "moments to compare");

    CLI::App* duality = app.add_subcommand("duality", "Monte Carlo and generator-level duality checks");
    add_common(duality, common);
    duality->add_option("--t", ts, "time grid (default 0.1 0.5 1)");
    duality->add_option("--x0", xs, "x grid (default 0.2 0.5 0.8)");
    duality->add_option("--v", v_csv, "single initial vector instead of e_1, e_2");
    duality->add_option("--dt", dt, "forward Euler step");

    CLI::App* fix = app.add_subcommand("fixation", "fixation probability via the dual");
    add_common(fix, common);
    fix->add_option("--x0", x0, "initial frequency");
    fix->add_option("--horizon", horizon, "dual time-average horizon");
    fix->add_flag("--force", common.force, "run even if the rate-balance condition fails");

    CLI::App* mom = app.add_subcommand("moments", "stationary moments with cross-check");
    add_common(mom, common);
    mom->add_option("--n-max", n_max, "highest moment");
    mom->add_flag("--force", common.force, "run even if the rate-balance condition fails");

    CLI::App* recur = app.add_subcommand("recursion", "stationary moment recursion residuals");
    add_common(recur, common);
    recur->add_option("--n-max", n_max, "check recursions for n = 1..n_max");
    recur->add_flag("--force", common.force, "run even if the rate-balance condition fails");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check(common, lyap_hi);
        if (fwd->parsed()) return cmd_simulate_forward(common, x0, t, dt, n_max);
        if (dual->parsed()) return cmd_simulate_dual(common, v_csv, t, l_max);
        if (moran->parsed()) return cmd_moran(common, K, x0, t, topt->count() > 0, n_max);
        if (duality->parsed()) return cmd_duality(common, ts, xs, v_csv, dt);
        if (fix->parsed()) return cmd_fixation(common, x0, horizon);
        if (mom->parsed()) return cmd_moments(common, n_max);
        if (recur->parsed()) return cmd_recursion(common, n_max);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
