#include "dcop/g24.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dcop {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = std::numbers::pi;

// Base g24 constraint polynomials; the feasible region is the area under
// min(c1, c2) inside [0,3] x [0,4], two disconnected lobes pinched at x1 = 1.
//   g1 <= 0  <=>  y2 <= 2 x1^4 - 8 x1^3 + 8 x1^2 + 2
//   g2 <= 0  <=>  y2 <= 4 x1^4 - 32 x1^3 + 88 x1^2 - 96 x1 + 36
double base_g1(double x1, double y2) {
    return -2.0 * std::pow(x1, 4) + 8.0 * std::pow(x1, 3) - 8.0 * x1 * x1 + y2 - 2.0;
}

double base_g2(double x1, double y2) {
    return -4.0 * std::pow(x1, 4) + 32.0 * std::pow(x1, 3) - 88.0 * x1 * x1 + 96.0 * x1 + y2 -
           36.0;
}

// Coefficients that are exact zeros of the sine land on multiples of pi;
// snap away the last-bit noise so degenerate objectives are exactly flat.
double snap(double v) { return std::abs(v) < 1e-12 ? 0.0 : v; }

// Objective coefficient schedules, f(x,t) = -(p1(t) x1 + p2(t) x2).

// Cycling schedule: a full swing of the x1 coefficient every 2/k steps.
double sin_schedule(double k, int t) { return snap(std::sin(k * kPi * t + kPi / 2.0)); }

// Sweeping schedule: one quarter-swing to the flat crest, then a slow creep
// into the negative band. The optimum leaves its start basin at the first
// change and never returns to a previously occupied spot.
double sweep_schedule(double k, int t) {
    if (t == 0) return 1.0;
    return snap(std::cos(k * kPi * (1.0 + (t - 1) / 32.0)));
}

// Alternating schedule: x1's coefficient updates at even times, x2's at odd
// times, each holding its previous value in between; an eighth-swing per
// update.
double alt_p1(double k, int t) {
    int u = t - (t % 2);
    return snap(std::sin(k * kPi * u / 8.0 + kPi / 2.0));
}

double alt_p2(double k, int t) {
    if (t == 0) return 1.0;
    int u = (t % 2 == 1) ? t - 1 : t - 2;
    return snap(std::sin(k * kPi * u / 8.0 + kPi / 2.0));
}

// Constraint-band offsets applied to the x2 slot of the base polynomials.
// Severity S stretches the same sweep over more time steps.
double shift_grow(int t, int s) { return std::max(0.0, 2.0 - 2.0 * t / s); }
double shift_swap(int t, int s) { return std::min(2.0, 4.0 * t / s); }

const std::vector<G24Info> kCatalog = {
    {G24Id::G24_1,  "g24_1",  false, true,  0.442,  0.442},
    {G24Id::G24_f,  "g24_f",  false, false, 0.442,  0.442},
    {G24Id::G24_2,  "g24_2",  false, true,  0.442,  0.442},
    {G24Id::G24_3,  "g24_3",  true,  false, 0.071,  0.4921},
    {G24Id::G24_3b, "g24_3b", true,  true,  0.071,  0.4921},
    {G24Id::G24_3f, "g24_3f", false, false, 0.071,  0.071},
    {G24Id::G24_4,  "g24_4",  true,  true,  0.0,    0.442},
    {G24Id::G24_5,  "g24_5",  true,  true,  0.0,    0.442},
    {G24Id::G24_6a, "g24_6a", false, true,  0.1668, 0.1668},
    {G24Id::G24_6b, "g24_6b", false, true,  0.5001, 0.5001},
    {G24Id::G24_6c, "g24_6c", false, true,  0.3333, 0.3333},
    {G24Id::G24_6d, "g24_6d", false, true,  0.2091, 0.2091},
    {G24Id::G24_7,  "g24_7",  true,  false, 0.0,    0.442},
    {G24Id::G24_8b, "g24_8b", false, true,  0.442,  0.442},
};

} // namespace

const std::vector<G24Info>& g24_catalog() { return kCatalog; }

const G24Info& g24_info(G24Id id) { return kCatalog[static_cast<int>(id)]; }

std::string_view g24_name(G24Id id) { return g24_info(id).name; }

G24Id g24_from_name(std::string_view name) {
    std::string lowered(name);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (const auto& info : kCatalog)
        if (info.name == lowered) return info.id;
    throw std::invalid_argument("unknown instance: " + std::string(name));
}

DynamicProblem make_instance(G24Id id, double k, int severity, int fc) {
    if (!(k > 0.0)) throw std::invalid_argument("make_instance: k must be positive");
    if (severity != 10 && severity != 20 && severity != 50)
        throw std::invalid_argument("make_instance: S must be one of {10, 20, 50}");
    if (fc <= 0) throw std::invalid_argument("make_instance: fc must be positive");

    const G24Info& info = g24_info(id);
    DynamicProblem p;
    p.dimension = 2;
    p.lower = {0.0, 0.0};
    p.upper = {3.0, 4.0};
    p.objective_severity = k;
    p.constraint_severity = severity;
    p.change_frequency = fc;
    p.has_dynamic_constraints = info.dynamic_constraints;

    const int s = severity;

    // objective
    switch (id) {
    case G24Id::G24_f:
    case G24Id::G24_3:
    case G24Id::G24_3f:
    case G24Id::G24_7:
        p.objective = [](std::span<const double> x, int) { return -(x[0] + x[1]); };
        break;
    case G24Id::G24_2:
    case G24Id::G24_5:
        p.objective = [k](std::span<const double> x, int t) {
            return -(alt_p1(k, t) * x[0] + alt_p2(k, t) * x[1]);
        };
        break;
    case G24Id::G24_4:
        // the x2 coefficient carries the dynamics here
        p.objective = [k](std::span<const double> x, int t) {
            return -(x[0] + sin_schedule(k, t) * x[1]);
        };
        break;
    case G24Id::G24_8b:
        // optimum rides a circle through the constrained box; the centre is
        // infeasible on part of the cycle
        p.objective = [k](std::span<const double> x, int t) {
            double u1 = 1.5 + 1.2 * std::cos(k * kPi * t);
            double u2 = 2.0 + 1.2 * std::sin(k * kPi * t);
            double dx = x[0] - u1, dy = x[1] - u2;
            return std::sqrt(dx * dx + dy * dy) - 3.0;
        };
        break;
    case G24Id::G24_1:
        p.objective = [k](std::span<const double> x, int t) {
            return -(sweep_schedule(k, t) * x[0] + x[1]);
        };
        break;
    default: // G24_3b, G24_6a..d
        p.objective = [k](std::span<const double> x, int t) {
            return -(sin_schedule(k, t) * x[0] + x[1]);
        };
        break;
    }

    // constraints
    auto band_pair = [s](double (*shift)(int, int)) {
        std::vector<DynamicProblem::TimeFn> g;
        g.push_back([s, shift](std::span<const double> x, int t) {
            return base_g1(x[0], x[1] + shift(t, s));
        });
        g.push_back([s, shift](std::span<const double> x, int t) {
            return base_g2(x[0], x[1] + shift(t, s));
        });
        return g;
    };
    auto static_pair = [] {
        std::vector<DynamicProblem::TimeFn> g;
        g.push_back([](std::span<const double> x, int) { return base_g1(x[0], x[1]); });
        g.push_back([](std::span<const double> x, int) { return base_g2(x[0], x[1]); });
        return g;
    };
    auto strips = [](double cap) {
        std::vector<DynamicProblem::TimeFn> g;
        g.push_back([](std::span<const double> x, int) { return (x[0] - 1.0) * (2.0 - x[0]); });
        g.push_back([cap](std::span<const double> x, int) { return x[1] - cap; });
        return g;
    };

    switch (id) {
    case G24Id::G24_3:
    case G24Id::G24_3b:
    case G24Id::G24_4:
    case G24Id::G24_5:
        p.inequality = band_pair(&shift_grow);
        break;
    case G24Id::G24_3f:
        p.inequality.push_back(
            [](std::span<const double> x, int) { return base_g1(x[0], x[1] + 2.0); });
        p.inequality.push_back(
            [](std::span<const double> x, int) { return base_g2(x[0], x[1] + 2.0); });
        break;
    case G24Id::G24_7:
        // the two lobes trade places: one boundary descends while the other
        // lifts, so part of the population is stranded at every step
        p.inequality.push_back([s](std::span<const double> x, int t) {
            return base_g1(x[0], x[1] + shift_swap(t, s));
        });
        p.inequality.push_back([s](std::span<const double> x, int t) {
            return base_g2(x[0], x[1] - shift_swap(t, s));
        });
        break;
    case G24Id::G24_6a:
        p.inequality = strips(1.0);
        break;
    case G24Id::G24_6b:
        p.inequality = strips(3.0);
        break;
    case G24Id::G24_6c:
        p.inequality = strips(2.0);
        break;
    case G24Id::G24_6d:
        // single feasible strip
        p.inequality.push_back([](std::span<const double> x, int) { return 2.0 - x[0]; });
        p.inequality.push_back([](std::span<const double> x, int) { return x[1] - 2.5; });
        break;
    default:
        p.inequality = static_pair();
        break;
    }

    p.validate();
    return p;
}

double feasible_region_ratio_serial(const DynamicProblem& problem, int t, long long n_samples,
                                    std::uint64_t seed) {
    const int d = problem.dimension;
    long long hits = 0;
    std::vector<double> x(d);
    for (long long i = 0; i < n_samples; ++i) {
        for (int j = 0; j < d; ++j) {
            double u = counter_uniform(seed, static_cast<std::uint64_t>(i) * d + j);
            x[j] = problem.lower[j] + u * (problem.upper[j] - problem.lower[j]);
        }
        bool ok = true;
        for (const auto& g : problem.inequality)
            if (g(x, t) > 0.0) { ok = false; break; }
        if (ok)
            for (const auto& h : problem.equality)
                if (std::abs(h(x, t)) > 1e-4) { ok = false; break; }
        if (ok) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(n_samples);
}

double feasible_region_ratio(const DynamicProblem& problem, int t, long long n_samples,
                             std::uint64_t seed) {
    const int d = problem.dimension;
    long long hits = 0;
#pragma omp parallel reduction(+ : hits)
    {
        std::vector<double> x(d);
#pragma omp for schedule(static)
        for (long long i = 0; i < n_samples; ++i) {
            for (int j = 0; j < d; ++j) {
                double u = counter_uniform(seed, static_cast<std::uint64_t>(i) * d + j);
                x[j] = problem.lower[j] + u * (problem.upper[j] - problem.lower[j]);
            }
            bool ok = true;
            for (const auto& g : problem.inequality)
                if (g(x, t) > 0.0) { ok = false; break; }
            if (ok)
                for (const auto& h : problem.equality)
                    if (std::abs(h(x, t)) > 1e-4) { ok = false; break; }
            if (ok) ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(n_samples);
}

// --- optima table -------------------------------------------------------------

bool OptimaEntry::present() const { return !std::isnan(f_star); }

const OptimaEntry& OptimaTable::at(int t) const {
    if (t < 0 || t >= static_cast<int>(by_time.size()))
        throw std::out_of_range("OptimaTable: no entry for requested time");
    return by_time[t];
}

std::vector<double> OptimaTable::f_star_by_time() const {
    std::vector<double> out(by_time.size(), kNaN);
    for (std::size_t t = 0; t < by_time.size(); ++t) out[t] = by_time[t].f_star;
    return out;
}

void OptimaTable::save(std::ostream& os) const {
    os << "id S t f_star x1 x2\n";
    char buf[64];
    for (std::size_t t = 0; t < by_time.size(); ++t) {
        const auto& e = by_time[t];
        os << g24_name(id) << ' ' << severity << ' ' << t << ' ';
        if (!e.present()) {
            os << "NaN NaN NaN\n";
            continue;
        }
        std::snprintf(buf, sizeof buf, "%.15g", e.f_star);
        os << buf;
        for (double xi : e.x) {
            std::snprintf(buf, sizeof buf, " %.15g", xi);
            os << buf;
        }
        os << "\n";
    }
}

OptimaTable OptimaTable::load(std::istream& is) {
    OptimaTable table;
    std::string line;
    bool have_id = false;
    while (std::getline(is, line)) {
        if (line.empty() || line.rfind("id ", 0) == 0) continue;
        std::istringstream ss(line);
        std::string name, fs, x1, x2;
        int sev, t;
        ss >> name >> sev >> t >> fs >> x1 >> x2;
        if (!ss) continue;
        if (!have_id) {
            table.id = g24_from_name(name);
            table.severity = sev;
            have_id = true;
        }
        if (static_cast<int>(table.by_time.size()) <= t) table.by_time.resize(t + 1, {kNaN, {}});
        OptimaEntry e;
        if (fs == "NaN") {
            e.f_star = kNaN;
        } else {
            e.f_star = std::stod(fs);
            e.x = {std::stod(x1), std::stod(x2)};
        }
        table.by_time[t] = std::move(e);
    }
    return table;
}

namespace {

// The landscape frozen at one time index; oracle runs optimize each window
// from scratch so lobe-hopping failures of a tracking population cannot
// contaminate the reference values.
DynamicProblem freeze_at(const DynamicProblem& problem, int t) {
    DynamicProblem frozen = problem;
    frozen.objective = [inner = problem.objective, t](std::span<const double> x, int) {
        return inner(x, t);
    };
    for (auto& g : frozen.inequality)
        g = [inner = g, t](std::span<const double> x, int) { return inner(x, t); };
    for (auto& h : frozen.equality)
        h = [inner = h, t](std::span<const double> x, int) { return inner(x, t); };
    frozen.has_dynamic_constraints = false;
    return frozen;
}

} // namespace

OptimaTable compute_oracle_optima(G24Id id, double k, int severity, int runs, const DEConfig& de,
                                  int fc, int max_times, std::uint64_t master_seed) {
    if (runs < 1) throw std::invalid_argument("oracle: runs must be positive");
    OptimaTable table;
    table.id = id;
    table.severity = severity;
    table.by_time.assign(max_times, {kNaN, {}});

    std::vector<OptimaEntry> candidates(static_cast<std::size_t>(max_times) * runs, {kNaN, {}});
#pragma omp parallel for schedule(dynamic)
    for (std::size_t task = 0; task < candidates.size(); ++task) {
        int t = static_cast<int>(task) / runs;
        int r = static_cast<int>(task) % runs;
        DynamicProblem frozen = freeze_at(make_instance(id, k, severity, fc), t);
        DEConfig cfg = de;
        std::ostringstream tag;
        tag << "oracle|" << g24_name(id) << '|' << severity << '|' << t << '|' << r;
        cfg.seed = fnv1a64(tag.str(), master_seed ^ 0xa5a5a5a5a5a5a5a5ULL);
        EvaluationClock clock(fc, 1); // one window's budget, fresh start
        auto strategy = make_strategy("feasibility", StrategyParams{}, cfg.np,
                                      cfg.evals_per_generation(), fc);
        RunTrace trace = run(frozen, *strategy, cfg, clock);
        if (!trace.windows.empty() && !trace.windows[0].best_feasible.empty()) {
            const auto& best = trace.windows[0].best_feasible.back();
            candidates[task] = {best.f, best.x};
        }
    }
    for (std::size_t task = 0; task < candidates.size(); ++task) {
        int t = static_cast<int>(task) / runs;
        const auto& e = candidates[task];
        if (!e.present()) continue;
        if (!table.by_time[t].present() || e.f_star < table.by_time[t].f_star)
            table.by_time[t] = e;
    }
    return table;
}

} // namespace dcop
