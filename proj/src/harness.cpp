#include "dcop/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dcop {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_double(double v, const char* fmt = "%.6g") {
    if (std::isnan(v)) return "NaN";
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "instances") {
        cfg.instances.clear();
        for (const auto& name : split_list(value)) cfg.instances.push_back(g24_from_name(name));
    } else if (key == "severities") {
        cfg.severities.clear();
        for (const auto& v : split_list(value)) cfg.severities.push_back(std::stoi(v));
    } else if (key == "strategies") {
        cfg.strategies = split_list(value);
    } else if (key == "runs") cfg.runs = std::stoi(value);
    else if (key == "np") cfg.np = std::stoi(value);
    else if (key == "cr") cfg.cr = std::stod(value);
    else if (key == "f_lo") cfg.f_lo = std::stod(value);
    else if (key == "f_hi") cfg.f_hi = std::stod(value);
    else if (key == "fc") cfg.fc = std::stoi(value);
    else if (key == "times") cfg.times = std::stoi(value);
    else if (key == "k") cfg.k = std::stod(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "workers") cfg.workers = std::stoi(value);
    else if (key == "resume") cfg.resume = value == "1" || value == "true";
    else if (key == "auto_oracle") cfg.auto_oracle = value == "1" || value == "true";
    else if (key == "oracle_runs") cfg.oracle_runs = std::stoi(value);
    else if (key == "oracle_budget_factor") cfg.oracle_budget_factor = std::stoi(value);
    else if (key == "bound_policy") cfg.bound_policy = value;
    else if (key == "pf") cfg.strategy_params.pf = std::stod(value);
    else if (key == "cp") cfg.strategy_params.cp = std::stod(value);
    else if (key == "theta_frac") cfg.strategy_params.theta_frac = std::stod(value);
    else if (key == "tc_frac") cfg.strategy_params.tc_frac = std::stod(value);
    else if (key == "penalty_factor") cfg.strategy_params.penalty_factor = std::stod(value);
    else if (key == "eq_tolerance") cfg.strategy_params.eq_tolerance = std::stod(value);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

} // namespace

std::vector<G24Id> ExperimentConfig::instance_list() const {
    if (!instances.empty()) return instances;
    std::vector<G24Id> all;
    for (const auto& info : g24_catalog()) all.push_back(info.id);
    return all;
}

DEConfig ExperimentConfig::de_config() const {
    DEConfig de;
    de.np = np;
    de.cr = cr;
    de.f_lo = f_lo;
    de.f_hi = f_hi;
    de.sentinel_indices = {0, np / 2 - 1}; // {1, NP/2} in 1-based terms
    de.bound_policy = bound_policy_from_string(bound_policy);
    de.validate();
    return de;
}

void ExperimentConfig::validate() const {
    de_config();
    if (runs < 1) throw std::invalid_argument("config: runs must be positive");
    if (fc < 1 || times < 1) throw std::invalid_argument("config: fc and times must be positive");
    if (severities.empty()) throw std::invalid_argument("config: no severities");
    for (int s : severities)
        if (s != 10 && s != 20 && s != 50)
            throw std::invalid_argument("config: severity outside {10,20,50}");
    if (strategies.empty()) throw std::invalid_argument("config: no strategies");
}

ExperimentConfig load_config(const fs::path& path) {
    ExperimentConfig cfg;
    apply_config_file(cfg, path);
    return cfg;
}

void set_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    set_key(cfg, key, value);
}

void apply_config_file(ExperimentConfig& cfg, const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r\n") != std::string::npos)
                throw std::runtime_error("config: bad line " + std::to_string(lineno));
            continue;
        }
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r\n");
            auto e = s.find_last_not_of(" \t\r\n");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    std::ostringstream ss;
    for (G24Id id : cfg.instance_list()) ss << g24_name(id) << ',';
    ss << '|';
    for (int s : cfg.severities) ss << s << ',';
    ss << '|';
    for (const auto& s : cfg.strategies) ss << s << ',';
    ss << '|' << cfg.runs << '|' << cfg.np << '|' << cfg.cr << '|' << cfg.f_lo << '|' << cfg.f_hi
       << '|' << cfg.fc << '|' << cfg.times << '|' << cfg.k << '|' << cfg.seed << '|'
       << cfg.oracle_runs << '|' << cfg.oracle_budget_factor << '|' << cfg.bound_policy << '|'
       << cfg.strategy_params.pf << '|'
       << cfg.strategy_params.cp << '|' << cfg.strategy_params.theta_frac << '|'
       << cfg.strategy_params.tc_frac << '|' << cfg.strategy_params.penalty_factor << '|'
       << cfg.strategy_params.eq_tolerance;
    return fnv1a64(ss.str());
}

std::uint64_t run_seed(std::uint64_t master, G24Id id, int severity, std::string_view strategy,
                       int run) {
    std::ostringstream ss;
    ss << "run|" << g24_name(id) << '|' << severity << '|' << strategy << '|' << run;
    return fnv1a64(ss.str(), master ^ 0x5bd1e995c6b34b27ULL);
}

std::vector<GridCell> grid_cells(const ExperimentConfig& cfg) {
    std::vector<GridCell> cells;
    for (G24Id id : cfg.instance_list()) {
        const auto& info = g24_info(id);
        if (info.dynamic_constraints) {
            for (int s : cfg.severities) cells.push_back({id, s});
        } else {
            // static constraints: results identical across severities, keep one
            int s = cfg.severities.front();
            if (std::find(cfg.severities.begin(), cfg.severities.end(), 20) !=
                cfg.severities.end())
                s = 20;
            cells.push_back({id, s});
        }
    }
    return cells;
}

// --- store --------------------------------------------------------------------

fs::path ResultStore::optima_path(G24Id id, int severity) const {
    std::ostringstream ss;
    ss << g24_name(id) << "_S" << severity << ".txt";
    return dir_ / "optima" / ss.str();
}

fs::path ResultStore::trace_path(G24Id id, int severity, std::string_view strategy,
                                 int run) const {
    char runbuf[16];
    std::snprintf(runbuf, sizeof runbuf, "r%03d", run);
    std::ostringstream ss;
    ss << g24_name(id) << "_S" << severity << '_' << strategy << '_' << runbuf << ".txt";
    return dir_ / "traces" / ss.str();
}

fs::path ResultStore::report_path(std::string_view name) const {
    return dir_ / "reports" / std::string(name);
}

fs::path ResultStore::plot_path(G24Id id, int severity, std::string_view strategy) const {
    std::ostringstream ss;
    ss << g24_name(id) << "_S" << severity << '_' << strategy << ".txt";
    return dir_ / "plotdata" / ss.str();
}

void ResultStore::prepare() const {
    fs::create_directories(dir_ / "optima");
    fs::create_directories(dir_ / "traces");
    fs::create_directories(dir_ / "reports");
    fs::create_directories(dir_ / "plotdata");
}

OptimaTable ResultStore::load_optima(G24Id id, int severity) const {
    std::ifstream in(optima_path(id, severity));
    if (!in) {
        std::ostringstream msg;
        msg << "missing optima table for " << g24_name(id) << " S=" << severity
            << "; run the oracle subcommand first";
        throw std::runtime_error(msg.str());
    }
    return OptimaTable::load(in);
}

RunTrace ResultStore::load_trace(G24Id id, int severity, std::string_view strategy,
                                 int run) const {
    std::ifstream in(trace_path(id, severity, strategy, run));
    if (!in)
        throw std::runtime_error("missing trace: " +
                                 trace_path(id, severity, strategy, run).string());
    return RunTrace::load(in);
}

// --- execution ------------------------------------------------------------

namespace {

void write_manifest(const ExperimentConfig& cfg, const ResultStore& store) {
    std::ofstream out(store.manifest_path());
    char hashbuf[32];
    std::snprintf(hashbuf, sizeof hashbuf, "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    out << "config_hash " << hashbuf << "\n";
    out << "format_version 1\n";
    std::time_t now = std::time(nullptr);
    char tbuf[64];
    std::strftime(tbuf, sizeof tbuf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "created " << tbuf << "\n";
    for (const auto& cell : grid_cells(cfg))
        for (const auto& strat : cfg.strategies)
            for (int r = 0; r < cfg.runs; ++r)
                out << "cell " << g24_name(cell.id) << ' ' << cell.severity << ' ' << strat << ' '
                    << r << " seed " << run_seed(cfg.seed, cell.id, cell.severity, strat, r)
                    << "\n";
}

bool manifest_matches(const ExperimentConfig& cfg, const ResultStore& store) {
    std::ifstream in(store.manifest_path());
    if (!in) return false;
    std::string key, value;
    in >> key >> value;
    if (key != "config_hash") return false;
    char hashbuf[32];
    std::snprintf(hashbuf, sizeof hashbuf, "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    return value == hashbuf;
}

void apply_workers(const ExperimentConfig& cfg) {
#ifdef _OPENMP
    if (cfg.workers > 0) omp_set_num_threads(cfg.workers);
#else
    (void)cfg;
#endif
}

} // namespace

void ensure_optima(const ExperimentConfig& cfg, const ResultStore& store) {
    auto cells = grid_cells(cfg);
    std::vector<GridCell> missing;
    for (const auto& cell : cells)
        if (!fs::exists(store.optima_path(cell.id, cell.severity))) missing.push_back(cell);
    if (missing.empty()) return;
    if (!cfg.auto_oracle)
        throw std::runtime_error("missing optima tables and auto_oracle disabled");

    DEConfig de = cfg.de_config();
    int oracle_fc = cfg.fc * std::max(1, cfg.oracle_budget_factor);
    for (const auto& cell : missing) {
        OptimaTable table = compute_oracle_optima(cell.id, cfg.k, cell.severity, cfg.oracle_runs,
                                                  de, oracle_fc, cfg.times, cfg.seed);
        std::ofstream out(store.optima_path(cell.id, cell.severity));
        table.save(out);
    }
}

void run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    apply_workers(cfg);
    ResultStore store(cfg.out_dir);
    store.prepare();

    if (cfg.resume && fs::exists(store.manifest_path()) && !manifest_matches(cfg, store))
        throw std::runtime_error("resume requested but the existing manifest was produced by a "
                                 "different configuration");

    ensure_optima(cfg, store);

    struct Task {
        GridCell cell;
        int strategy_index;
        int run;
    };
    std::vector<Task> tasks;
    for (const auto& cell : grid_cells(cfg))
        for (std::size_t s = 0; s < cfg.strategies.size(); ++s)
            for (int r = 0; r < cfg.runs; ++r)
                tasks.push_back({cell, static_cast<int>(s), r});

    DEConfig de_base = cfg.de_config();
    std::exception_ptr failure = nullptr;

#pragma omp parallel for schedule(dynamic)
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
        try {
            const Task& task = tasks[ti];
            const std::string& strat_name = cfg.strategies[task.strategy_index];
            fs::path path =
                store.trace_path(task.cell.id, task.cell.severity, strat_name, task.run);
            if (cfg.resume && fs::exists(path)) continue;

            DynamicProblem prob =
                make_instance(task.cell.id, cfg.k, task.cell.severity, cfg.fc);
            DEConfig de = de_base;
            de.seed = run_seed(cfg.seed, task.cell.id, task.cell.severity, strat_name, task.run);
            EvaluationClock clock(cfg.fc, cfg.times);
            auto strategy = make_strategy(strat_name, cfg.strategy_params, de.np,
                                          de.evals_per_generation(), cfg.fc);
            RunTrace trace = run(prob, *strategy, de, clock);

            std::ofstream out(path);
            trace.save(out);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    write_manifest(cfg, store);
}

// --- reporting ------------------------------------------------------------

std::vector<SampleGroup> offline_error_groups(const ExperimentConfig& cfg,
                                              const ResultStore& store, const GridCell& cell) {
    OptimaTable optima = store.load_optima(cell.id, cell.severity);
    auto f_star = optima.f_star_by_time();
    std::vector<SampleGroup> groups;
    for (const auto& strat : cfg.strategies) {
        SampleGroup g;
        g.label = strat;
        for (int r = 0; r < cfg.runs; ++r) {
            RunTrace trace = store.load_trace(cell.id, cell.severity, strat, r);
            g.values.push_back(offline_error(trace, f_star));
        }
        groups.push_back(std::move(g));
    }
    return groups;
}

namespace {

struct CellMeasures {
    GridCell cell;
    std::vector<MeasureReport> by_strategy;               // indexed like cfg.strategies
    std::vector<std::vector<RunMeasures>> runs_by_strategy;
};

CellMeasures cell_measures(const ExperimentConfig& cfg, const ResultStore& store,
                           const GridCell& cell) {
    CellMeasures cm;
    cm.cell = cell;
    OptimaTable optima = store.load_optima(cell.id, cell.severity);
    auto f_star = optima.f_star_by_time();
    for (const auto& strat : cfg.strategies) {
        std::vector<RunMeasures> runs;
        for (int r = 0; r < cfg.runs; ++r) {
            RunTrace trace = store.load_trace(cell.id, cell.severity, strat, r);
            runs.push_back(run_measures(trace, f_star, cfg.times));
        }
        cm.by_strategy.push_back(aggregate_measures(runs));
        cm.runs_by_strategy.push_back(std::move(runs));
    }
    return cm;
}

std::string cell_label(const GridCell& cell) {
    std::ostringstream ss;
    ss << g24_name(cell.id) << " S=" << cell.severity;
    return ss.str();
}

void write_offline_report(const ExperimentConfig& cfg, const std::vector<CellMeasures>& cells,
                          std::ostream& os) {
    os << "Modified offline error, mean(+-std) over " << cfg.runs
       << " runs; * marks the best strategy per cell\n\n";
    for (const auto& cm : cells) {
        os << cell_label(cm.cell) << "\n";
        int best = -1;
        for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
            double m = cm.by_strategy[s].m_off_e.mean;
            if (!std::isnan(m) && (best < 0 || m < cm.by_strategy[best].m_off_e.mean))
                best = static_cast<int>(s);
        }
        for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
            const auto& a = cm.by_strategy[s].m_off_e;
            os << "  " << cfg.strategies[s] << ": " << fmt_double(a.mean, "%.4g") << "(+-"
               << fmt_double(a.stddev, "%.3g") << ")";
            if (static_cast<int>(s) == best) os << " *";
            os << "\n";
        }
        os << "\n";
    }
}

void write_measures_report(const ExperimentConfig& cfg, const std::vector<CellMeasures>& cells,
                           std::ostream& os) {
    const char* names[] = {"AE", "CS", "PR", "FP", "SP"};
    os << "Behavior measures, mean(+-std) over " << cfg.runs << " runs\n\n";
    for (const auto& cm : cells) {
        os << cell_label(cm.cell) << "\n";
        os << "  measure";
        for (const auto& s : cfg.strategies) os << ' ' << s;
        os << "\n";
        for (int mi = 0; mi < 5; ++mi) {
            os << "  " << names[mi];
            for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
                const auto& rep = cm.by_strategy[s];
                const Aggregate* a = nullptr;
                switch (mi) {
                case 0: a = &rep.ae; break;
                case 1: a = &rep.cs; break;
                case 2: a = &rep.pr; break;
                case 3: a = &rep.fr; break;
                default: a = &rep.sr; break;
                }
                os << ' ' << fmt_double(a->mean, "%.4g") << "(+-" << fmt_double(a->stddev, "%.3g")
                   << ")";
            }
            os << "\n";
        }
        os << "\n";
    }
}

void write_measures_tsv(const ExperimentConfig& cfg, const std::vector<CellMeasures>& cells,
                        std::ostream& os) {
    os << "instance\tS\tstrategy\tmeasure\tmean\tstd\tn_runs\n";
    const char* names[] = {"M_off_e", "FR", "SR", "AE", "CS", "PR"};
    for (const auto& cm : cells) {
        for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
            const auto& rep = cm.by_strategy[s];
            const Aggregate* aggs[] = {&rep.m_off_e, &rep.fr, &rep.sr, &rep.ae, &rep.cs, &rep.pr};
            for (int mi = 0; mi < 6; ++mi)
                os << g24_name(cm.cell.id) << '\t' << cm.cell.severity << '\t'
                   << cfg.strategies[s] << '\t' << names[mi] << '\t'
                   << fmt_double(aggs[mi]->mean, "%.10g") << '\t'
                   << fmt_double(aggs[mi]->stddev, "%.10g") << '\t' << aggs[mi]->n << "\n";
        }
    }
}

void write_dominance(const ExperimentConfig& cfg, const ResultStore& store, std::ostream& os) {
    os << "Pairwise dominance from Kruskal-Wallis + Bonferroni-adjusted Dunn tests "
          "(alpha=0.05) on per-run modified offline errors.\n";
    os << "Cell entries: j(-) outperformed strategy j; j(+) dominated by strategy j.\n\n";
    os << "strategies:";
    for (std::size_t s = 0; s < cfg.strategies.size(); ++s)
        os << ' ' << cfg.strategies[s] << '(' << s + 1 << ')';
    os << "\n\n";
    for (const auto& cell : grid_cells(cfg)) {
        auto groups = offline_error_groups(cfg, store, cell);
        ComparisonResult res = posthoc_bonferroni(groups);
        os << cell_label(cell) << ":";
        for (std::size_t i = 0; i < groups.size(); ++i) {
            os << "  " << i + 1 << ":[";
            bool first = true;
            for (std::size_t j = 0; j < groups.size(); ++j) {
                if (i == j || res.relation[i][j] == Dominance::NoDifference) continue;
                if (!first) os << ", ";
                os << j + 1 << (res.relation[i][j] == Dominance::Outperforms ? "(-)" : "(+)");
                first = false;
            }
            os << "]";
        }
        os << "\n";
    }
}

void write_plot_data(const ExperimentConfig& cfg, const ResultStore& store,
                     const GridCell& cell) {
    OptimaTable optima = store.load_optima(cell.id, cell.severity);
    auto f_star = optima.f_star_by_time();
    for (const auto& strat : cfg.strategies) {
        std::vector<std::vector<double>> per_run_errors;
        std::size_t min_rows = SIZE_MAX;
        for (int r = 0; r < cfg.runs; ++r) {
            RunTrace trace = store.load_trace(cell.id, cell.severity, strat, r);
            std::vector<double> errs;
            errs.reserve(trace.rows.size());
            for (const auto& row : trace.rows) {
                double fs = row.t < static_cast<int>(f_star.size()) ? f_star[row.t] : kNaN;
                double ref = std::isnan(row.best_f) ? row.worst_f : row.best_f;
                errs.push_back(std::isnan(fs) ? kNaN : std::abs(fs - ref));
            }
            min_rows = std::min(min_rows, errs.size());
            per_run_errors.push_back(std::move(errs));
        }
        std::ofstream out(store.plot_path(cell.id, cell.severity, strat));
        out << "generation mean_error\n";
        for (std::size_t g = 0; g < min_rows; ++g) {
            double sum = 0;
            int n = 0;
            for (const auto& errs : per_run_errors) {
                if (!std::isnan(errs[g])) { sum += errs[g]; ++n; }
            }
            out << g << ' ' << fmt_double(n ? sum / n : kNaN, "%.10g") << "\n";
        }
    }
}

} // namespace

void make_report(const ExperimentConfig& cfg) {
    cfg.validate();
    apply_workers(cfg);
    ResultStore store(cfg.out_dir);
    store.prepare();

    auto cells = grid_cells(cfg);
    std::vector<CellMeasures> measures(cells.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < cells.size(); ++i)
        measures[i] = cell_measures(cfg, store, cells[i]);

    {
        std::ofstream os(store.report_path("offline.txt"));
        write_offline_report(cfg, measures, os);
    }
    {
        std::ofstream os(store.report_path("measures.txt"));
        write_measures_report(cfg, measures, os);
    }
    {
        std::ofstream os(store.report_path("measures.tsv"));
        write_measures_tsv(cfg, measures, os);
    }
    {
        std::ofstream os(store.report_path("dominance.txt"));
        write_dominance(cfg, store, os);
    }
    for (const auto& cell : cells) write_plot_data(cfg, store, cell);
}

void write_dominance_report(const ExperimentConfig& cfg) {
    cfg.validate();
    ResultStore store(cfg.out_dir);
    store.prepare();
    std::ofstream os(store.report_path("dominance.txt"));
    write_dominance(cfg, store, os);
}

} // namespace dcop
