// Command-line driver for the dynamic constrained optimization benchmark:
// oracle tables, experiment grids, report/statistics generation and the
// Monte Carlo feasible-region check.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcop/g24.hpp"
#include "dcop/harness.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> instances;
    std::vector<int> severities;
    std::vector<std::string> strategies;
    int runs = -1;
    long long seed = -1;
    std::string out;
    int workers = -1;
    bool resume = false;
    std::vector<std::pair<std::string, std::string>> overrides; // remaining config keys
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "key=value configuration file");
    cmd->add_option("--instances", opts.instances, "instance names (default: all 14)")
        ->delimiter(',');
    cmd->add_option("--severities", opts.severities, "constraint severities from {10,20,50}")
        ->delimiter(',');
    cmd->add_option("--strategies", opts.strategies,
                    "strategies: penalty feasibility epsilon stochastic")
        ->delimiter(',');
    cmd->add_option("--runs", opts.runs, "runs per grid cell");
    cmd->add_option("--seed", opts.seed, "master seed");
    cmd->add_option("--out", opts.out, "output directory (or env DCOP_OUT)");
    cmd->add_option("--workers", opts.workers, "parallel worker count (0 = default)");
    cmd->add_flag("--resume", opts.resume, "skip completed cells of a matching store");

    // every remaining configuration key is overridable by name
    static const char* kv_keys[] = {"np",    "cr",          "f_lo",        "f_hi",
                                    "fc",    "times",       "k",           "bound_policy",
                                    "pf",    "cp",          "theta_frac",  "tc_frac",
                                    "penalty_factor", "eq_tolerance", "oracle_runs",
                                    "oracle_budget_factor", "auto_oracle"};
    for (const char* key : kv_keys) {
        cmd->add_option_function<std::string>(
            std::string("--") + key,
            [&opts, key](const std::string& value) { opts.overrides.emplace_back(key, value); },
            std::string("configuration key ") + key);
    }
}

// precedence for the output directory: --out flag > config file > DCOP_OUT
dcop::ExperimentConfig build_config(const CommonOpts& opts) {
    dcop::ExperimentConfig cfg;
    if (const char* env = std::getenv("DCOP_OUT"); env && *env) cfg.out_dir = env;
    if (!opts.config_path.empty()) dcop::apply_config_file(cfg, opts.config_path);
    if (!opts.instances.empty()) {
        cfg.instances.clear();
        for (const auto& name : opts.instances) cfg.instances.push_back(dcop::g24_from_name(name));
    }
    if (!opts.severities.empty()) cfg.severities = opts.severities;
    if (!opts.strategies.empty()) cfg.strategies = opts.strategies;
    if (opts.runs >= 0) cfg.runs = opts.runs;
    if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
    if (!opts.out.empty()) cfg.out_dir = opts.out;
    if (opts.workers >= 0) cfg.workers = opts.workers;
    if (opts.resume) cfg.resume = true;
    for (const auto& [key, value] : opts.overrides) dcop::set_config_key(cfg, key, value);
    return cfg;
}

int run_feasratio(const dcop::ExperimentConfig& cfg, long long samples, int t_max) {
    std::cout << "instance S t ratio expected_lo expected_hi\n";
    bool all_ok = true;
    for (const auto& cell : dcop::grid_cells(cfg)) {
        const auto& info = dcop::g24_info(cell.id);
        dcop::DynamicProblem prob = dcop::make_instance(cell.id, cfg.k, cell.severity, cfg.fc);
        int times = info.dynamic_constraints ? t_max + 1 : 1;
        for (int t = 0; t < times; ++t) {
            double r = dcop::feasible_region_ratio(prob, t, samples,
                                                   cfg.seed ^ (0x9e37ULL * (t + 1)));
            double lo, hi;
            if (info.dynamic_constraints) {
                lo = std::max(0.0, info.feasible_lo - 0.02);
                hi = info.feasible_hi + 0.02;
            } else {
                lo = info.feasible_lo - 0.015;
                hi = info.feasible_hi + 0.015;
            }
            bool ok = r >= lo && r <= hi;
            all_ok = all_ok && ok;
            std::cout << dcop::g24_name(cell.id) << ' ' << cell.severity << ' ' << t << ' ' << r
                      << ' ' << lo << ' ' << hi << (ok ? "" : "  <-- outside") << "\n";
        }
    }
    std::cout << (all_ok ? "all ratios within the published brackets\n"
                         : "some ratios fell outside the published brackets\n");
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic constrained optimization benchmark harness"};
    app.require_subcommand(1);

    CommonOpts oracle_opts, run_opts, report_opts, stats_opts, feas_opts;

    auto* oracle_cmd =
        app.add_subcommand("oracle", "compute per-time reference optima tables");
    add_common(oracle_cmd, oracle_opts);

    auto* run_cmd = app.add_subcommand("run", "execute the experiment grid");
    add_common(run_cmd, run_opts);

    auto* report_cmd = app.add_subcommand("report", "emit tables and plot data from a store");
    add_common(report_cmd, report_opts);

    auto* stats_cmd = app.add_subcommand("stats", "emit the dominance matrix from a store");
    add_common(stats_cmd, stats_opts);

    auto* feas_cmd =
        app.add_subcommand("feasratio", "Monte Carlo feasible-region ratios vs published values");
    add_common(feas_cmd, feas_opts);
    long long samples = 1000000;
    int t_max = 10;
    feas_cmd->add_option("--samples", samples, "samples per (instance, severity, t)");
    feas_cmd->add_option("--tmax", t_max, "largest time index probed for dynamic constraints");

    CLI11_PARSE(app, argc, argv);

    try {
        if (oracle_cmd->parsed()) {
            auto cfg = build_config(oracle_opts);
            cfg.validate();
            dcop::ResultStore store(cfg.out_dir);
            store.prepare();
            dcop::ensure_optima(cfg, store);
            std::cout << "optima tables ready under " << store.dir() / "optima" << "\n";
        } else if (run_cmd->parsed()) {
            auto cfg = build_config(run_opts);
            dcop::run_experiment(cfg);
            std::cout << "grid complete; traces under " << cfg.out_dir << "/traces\n";
        } else if (report_cmd->parsed()) {
            auto cfg = build_config(report_opts);
            dcop::make_report(cfg);
            std::cout << "reports written under " << cfg.out_dir << "/reports\n";
        } else if (stats_cmd->parsed()) {
            auto cfg = build_config(stats_opts);
            dcop::write_dominance_report(cfg);
            std::cout << "dominance matrix written under " << cfg.out_dir << "/reports\n";
        } else if (feas_cmd->parsed()) {
            auto cfg = build_config(feas_opts);
            cfg.validate();
            return run_feasratio(cfg, samples, t_max);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
