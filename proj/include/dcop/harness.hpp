#ifndef DCOP_HARNESS_HPP
#define DCOP_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dcop/engine.hpp"
#include "dcop/g24.hpp"
#include "dcop/measures.hpp"
#include "dcop/stats.hpp"
#include "dcop/strategies.hpp"

namespace dcop {

/// Full description of an experiment grid. Defaults follow the published
/// configuration: 30 runs, NP=20, CR=0.2, F in [0.2, 0.8], fc=1000, T=10,
/// k=0.5, severities {10, 20, 50}.
struct ExperimentConfig {
    std::vector<G24Id> instances;                       // empty = all 14
    std::vector<int> severities{10, 20, 50};
    std::vector<std::string> strategies{"epsilon", "feasibility", "penalty", "stochastic"};
    int runs = 30;
    int np = 20;
    double cr = 0.2;
    double f_lo = 0.2, f_hi = 0.8;
    int fc = 1000;
    int times = 10; // T
    double k = 0.5;
    std::uint64_t seed = 42;
    std::string out_dir = "results";
    int workers = 0;   // 0 = library default
    bool resume = false;
    bool auto_oracle = true;
    int oracle_runs = 30;
    // reference optima come from pooled DE runs whose windows are this many
    // times longer than the experiment's, approximating the true per-time optima
    int oracle_budget_factor = 10;
    std::string bound_policy = "resample";
    StrategyParams strategy_params;

    std::vector<G24Id> instance_list() const; // defaults applied
    DEConfig de_config() const;
    void validate() const;
};

/// Load key=value configuration (one pair per line, '#' comments).
ExperimentConfig load_config(const std::filesystem::path& path);

/// Apply a configuration file on top of an existing configuration.
void apply_config_file(ExperimentConfig& cfg, const std::filesystem::path& path);

/// Set a single configuration key from its text form; throws on unknown keys.
void set_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Hash over the semantic experiment keys (excludes out_dir/workers/resume).
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// Per-run seed, derived by name so grid edits never perturb other cells.
std::uint64_t run_seed(std::uint64_t master, G24Id id, int severity, std::string_view strategy,
                       int run);

/// One (instance, severity) cell of the grid; severities of static-constraint
/// instances are collapsed to a single entry.
struct GridCell {
    G24Id id;
    int severity;
};

std::vector<GridCell> grid_cells(const ExperimentConfig& cfg);

/// Directory layout of one experiment.
class ResultStore {
public:
    explicit ResultStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path manifest_path() const { return dir_ / "manifest.txt"; }
    std::filesystem::path optima_path(G24Id id, int severity) const;
    std::filesystem::path trace_path(G24Id id, int severity, std::string_view strategy,
                                     int run) const;
    std::filesystem::path report_path(std::string_view name) const;
    std::filesystem::path plot_path(G24Id id, int severity, std::string_view strategy) const;

    void prepare() const; // create directories

    OptimaTable load_optima(G24Id id, int severity) const;
    RunTrace load_trace(G24Id id, int severity, std::string_view strategy, int run) const;

private:
    std::filesystem::path dir_;
};

/// Builds (or reuses) the optima tables needed by cfg.
void ensure_optima(const ExperimentConfig& cfg, const ResultStore& store);

/// Executes the full grid; deterministic per (config, seed). With resume on,
/// completed cells whose manifest matches are skipped.
void run_experiment(const ExperimentConfig& cfg);

/// Emits the report files (offline-error table, behavior-measure blocks,
/// dominance matrix, machine-readable exports, plot data).
void make_report(const ExperimentConfig& cfg);

/// Emits only the dominance matrix (the `stats` subcommand).
void write_dominance_report(const ExperimentConfig& cfg);

/// Per-run offline-error samples of one cell, one group per strategy.
std::vector<SampleGroup> offline_error_groups(const ExperimentConfig& cfg,
                                              const ResultStore& store, const GridCell& cell);

} // namespace dcop

#endif
