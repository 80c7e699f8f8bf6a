#include "dcop/engine.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dcop {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kDetectTol = 1e-12;
} // namespace

BoundPolicy bound_policy_from_string(std::string_view name) {
    if (name == "resample" || name == "resample-uniform") return BoundPolicy::ResampleUniform;
    if (name == "reflect") return BoundPolicy::Reflect;
    if (name == "clamp") return BoundPolicy::Clamp;
    throw std::invalid_argument("unknown bound policy: " + std::string(name));
}

void DEConfig::validate() const {
    if (np < 4) throw std::invalid_argument("DEConfig: NP must be >= 4");
    if (cr < 0.0 || cr > 1.0) throw std::invalid_argument("DEConfig: CR outside [0,1]");
    if (!(f_lo > 0.0) || !(f_hi <= 2.0) || f_lo > f_hi)
        throw std::invalid_argument("DEConfig: F range outside (0,2]");
    for (int s : sentinel_indices)
        if (s < 0 || s >= np) throw std::invalid_argument("DEConfig: sentinel index out of range");
}

std::vector<double> mutate(const Population& pop, int i, double f, Xoshiro& rng) {
    const int np = static_cast<int>(pop.members.size());
    if (np < 4) throw std::invalid_argument("mutate: NP must be >= 4");
    int r0, r1, r2;
    do { r0 = static_cast<int>(rng.below(np)); } while (r0 == i);
    do { r1 = static_cast<int>(rng.below(np)); } while (r1 == i || r1 == r0);
    do { r2 = static_cast<int>(rng.below(np)); } while (r2 == i || r2 == r0 || r2 == r1);

    const auto& a = pop.members[r0].x;
    const auto& b = pop.members[r1].x;
    const auto& c = pop.members[r2].x;
    std::vector<double> v(a.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] + f * (b[j] - c[j]);
    return v;
}

std::vector<double> crossover(std::span<const double> target, std::span<const double> mutant,
                              double cr, Xoshiro& rng) {
    if (target.size() != mutant.size()) throw std::invalid_argument("crossover: size mismatch");
    const std::size_t d = target.size();
    const std::size_t j_rand = rng.below(d);
    std::vector<double> u(d);
    for (std::size_t j = 0; j < d; ++j) {
        if (rng.uniform() <= cr || j == j_rand) u[j] = mutant[j];
        else u[j] = target[j];
    }
    return u;
}

std::vector<double> repair_bounds(std::vector<double> v, std::span<const double> lower,
                                  std::span<const double> upper, BoundPolicy policy, Xoshiro& rng) {
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] >= lower[j] && v[j] <= upper[j]) continue;
        switch (policy) {
        case BoundPolicy::ResampleUniform:
            v[j] = rng.uniform(lower[j], upper[j]);
            break;
        case BoundPolicy::Clamp:
            v[j] = std::clamp(v[j], lower[j], upper[j]);
            break;
        case BoundPolicy::Reflect: {
            double w = upper[j] - lower[j];
            double y = std::fmod(v[j] - lower[j], 2.0 * w);
            if (y < 0) y += 2.0 * w;
            v[j] = lower[j] + (y <= w ? y : 2.0 * w - y);
            break;
        }
        }
    }
    return v;
}

namespace {

/// Per-run bookkeeping shared by every evaluation: window event logs and the
/// running window-best used for the trace rows.
class Recorder {
public:
    Recorder(std::vector<WindowLog>& windows, int fc) : windows_(windows), fc_(fc) {}

    void note(const Individual& ind, long long total_after) {
        int t = ind.eval_time;
        if (static_cast<int>(windows_.size()) <= t) {
            windows_.resize(t + 1);
            for (int w = 0; w < static_cast<int>(windows_.size()); ++w) windows_[w].t = w;
        }
        WindowLog& wl = windows_[t];
        long long in_window = total_after - static_cast<long long>(t) * fc_;

        if (wl.best_any.empty() || ind.f < wl.best_any.back().f)
            wl.best_any.push_back({in_window, ind.f, ind.x});

        if (!ind.feasible) return;
        if (!wl.has_first_feasible) {
            wl.has_first_feasible = true;
            wl.first_feasible_eval = in_window;
            wl.first_feasible_f = ind.f;
        }
        if (wl.best_feasible.empty() || ind.f < wl.best_feasible.back().f)
            wl.best_feasible.push_back({in_window, ind.f, ind.x});
    }

    /// Best feasible objective observed so far in window t (NaN if none).
    double window_best(int t) const {
        if (t < 0 || t >= static_cast<int>(windows_.size())) return kNaN;
        const auto& wl = windows_[t];
        return wl.best_feasible.empty() ? kNaN : wl.best_feasible.back().f;
    }

private:
    std::vector<WindowLog>& windows_;
    int fc_;
};

} // namespace

RunTrace run(const DynamicProblem& problem, Strategy& strategy, const DEConfig& cfg,
             EvaluationClock& clock) {
    cfg.validate();
    problem.validate();
    const int np = cfg.np;
    const int d = problem.dimension;

    Xoshiro rng(cfg.seed);
    ViolationContext ctx(problem.inequality.size(), problem.equality.size());

    RunTrace trace;
    trace.seed = cfg.seed;
    trace.fc = clock.fc();
    Recorder recorder(trace.windows, clock.fc());

    Population pop;
    pop.members.reserve(np);

    auto eval_point = [&](std::span<const double> x) -> std::optional<Individual> {
        auto ind = evaluate(problem, x, clock, ctx);
        if (ind) recorder.note(*ind, clock.total_evaluations());
        return ind;
    };

    // initial population, uniform within bounds at t = 0
    bool exhausted = false;
    for (int i = 0; i < np && !exhausted; ++i) {
        std::vector<double> x(d);
        for (int j = 0; j < d; ++j) x[j] = rng.uniform(problem.lower[j], problem.upper[j]);
        auto ind = eval_point(x);
        if (!ind) { exhausted = true; break; }
        pop.members.push_back(std::move(*ind));
    }
    strategy.on_window_start(pop.members);

    auto record_row = [&](bool change) {
        GenerationRow row;
        row.generation = pop.generation;
        row.evaluations = clock.total_evaluations();
        row.t = static_cast<int>((clock.total_evaluations() - 1) / clock.fc());
        row.best_f = recorder.window_best(row.t);
        double best_phi = kNaN, worst_f = kNaN;
        for (const auto& m : pop.members) {
            if (std::isnan(best_phi) || m.phi < best_phi) best_phi = m.phi;
            if (std::isnan(worst_f) || m.f > worst_f) worst_f = m.f;
        }
        row.best_phi = best_phi;
        row.worst_f = worst_f;
        row.change_detected = change;
        trace.rows.push_back(row);
    };

    if (!pop.members.empty()) record_row(false);

    std::vector<Individual> trials;
    trials.reserve(np);
    while (!exhausted && !clock.exhausted()) {
        bool change_this_gen = false;
        trials.clear();

        for (int i = 0; i < np; ++i) {
            bool is_sentinel = std::find(cfg.sentinel_indices.begin(), cfg.sentinel_indices.end(),
                                         i) != cfg.sentinel_indices.end();
            if (is_sentinel) {
                auto fresh = eval_point(pop.members[i].x);
                if (!fresh) { exhausted = true; break; }
                bool changed = std::abs(fresh->f - pop.members[i].f) > kDetectTol ||
                               std::abs(fresh->raw_violation - pop.members[i].raw_violation) >
                                   kDetectTol;
                pop.members[i] = std::move(*fresh);
                if (changed) {
                    change_this_gen = true;
                    ++trace.changes_detected;
                    // re-evaluate the whole population at the current time
                    for (int j = 0; j < np; ++j) {
                        auto re = eval_point(pop.members[j].x);
                        if (!re) { exhausted = true; break; }
                        pop.members[j] = std::move(*re);
                    }
                    if (exhausted) break;
                    strategy.on_window_start(pop.members);
                }
            }

            double f = rng.uniform(cfg.f_lo, cfg.f_hi);
            auto v = mutate(pop, i, f, rng);
            auto u = crossover(pop.members[i].x, v, cfg.cr, rng);
            u = repair_bounds(std::move(u), problem.lower, problem.upper, cfg.bound_policy, rng);
            auto trial = eval_point(u);
            if (!trial) { exhausted = true; break; }
            trials.push_back(std::move(*trial));
        }

        if (static_cast<int>(trials.size()) == np) {
            strategy.select(pop.members, trials, rng);
        }
        ++pop.generation;
        strategy.on_generation_end(pop.members);
        record_row(change_this_gen);
    }

    trace.total_evaluations = clock.total_evaluations();
    return trace;
}

// --- trace (de)serialization ------------------------------------------------

namespace {

void write_double(std::ostream& os, double v) {
    if (std::isnan(v)) { os << "NaN"; return; }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

double read_double(const std::string& tok) {
    if (tok == "NaN") return kNaN;
    return std::stod(tok);
}

} // namespace

void RunTrace::save(std::ostream& os) const {
    os << "# seed " << seed << " total_evaluations " << total_evaluations << " changes "
       << changes_detected << " fc " << fc << "\n";
    os << "generation evaluations t best_f best_phi worst_f change_detected\n";
    for (const auto& r : rows) {
        os << r.generation << ' ' << r.evaluations << ' ' << r.t << ' ';
        write_double(os, r.best_f);
        os << ' ';
        write_double(os, r.best_phi);
        os << ' ';
        write_double(os, r.worst_f);
        os << ' ' << (r.change_detected ? 1 : 0) << "\n";
    }
    // evaluation-resolution window events (first feasible, best-feasible and
    // best-any improvements) used by the performance measures
    for (const auto& w : windows) {
        if (w.has_first_feasible) {
            os << "#F " << w.t << ' ' << w.first_feasible_eval << ' ';
            write_double(os, w.first_feasible_f);
            os << "\n";
        }
        for (const auto& e : w.best_feasible) {
            os << "#W " << w.t << ' ' << e.eval << ' ';
            write_double(os, e.f);
            for (double xi : e.x) { os << ' '; write_double(os, xi); }
            os << "\n";
        }
        for (const auto& e : w.best_any) {
            os << "#A " << w.t << ' ' << e.eval << ' ';
            write_double(os, e.f);
            os << "\n";
        }
    }
}

RunTrace RunTrace::load(std::istream& is) {
    RunTrace trace;
    std::string line;
    auto ensure_window = [&](int t) -> WindowLog& {
        if (static_cast<int>(trace.windows.size()) <= t) {
            trace.windows.resize(t + 1);
            for (int w = 0; w < static_cast<int>(trace.windows.size()); ++w)
                trace.windows[w].t = w;
        }
        return trace.windows[t];
    };
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        if (line[0] == '#') {
            std::string tag;
            ss >> tag;
            if (tag == "#") {
                std::string key;
                while (ss >> key) {
                    if (key == "seed") ss >> trace.seed;
                    else if (key == "total_evaluations") ss >> trace.total_evaluations;
                    else if (key == "changes") ss >> trace.changes_detected;
                    else if (key == "fc") ss >> trace.fc;
                }
            } else if (tag == "#F") {
                int t; long long ev; std::string f;
                ss >> t >> ev >> f;
                auto& w = ensure_window(t);
                w.has_first_feasible = true;
                w.first_feasible_eval = ev;
                w.first_feasible_f = read_double(f);
            } else if (tag == "#W" || tag == "#A") {
                int t; long long ev; std::string f;
                ss >> t >> ev >> f;
                WindowLog::Event e;
                e.eval = ev;
                e.f = read_double(f);
                std::string xi;
                while (ss >> xi) e.x.push_back(read_double(xi));
                auto& w = ensure_window(t);
                (tag == "#W" ? w.best_feasible : w.best_any).push_back(std::move(e));
            }
            continue;
        }
        if (line.rfind("generation", 0) == 0) continue; // header
        GenerationRow r;
        std::string bf, bp, wf;
        int chg;
        ss >> r.generation >> r.evaluations >> r.t >> bf >> bp >> wf >> chg;
        if (!ss) continue;
        r.best_f = read_double(bf);
        r.best_phi = read_double(bp);
        r.worst_f = read_double(wf);
        r.change_detected = chg != 0;
        trace.rows.push_back(r);
    }
    return trace;
}

} // namespace dcop
