#include "dcop/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dcop {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
} // namespace

std::vector<TimeWindowRecord> window_records(const RunTrace& trace,
                                             const std::vector<double>& f_star, int total_times,
                                             double precision) {
    std::vector<TimeWindowRecord> out(total_times);
    for (int t = 0; t < total_times; ++t) out[t].t = t;

    for (const auto& w : trace.windows) {
        if (w.t < 0 || w.t >= total_times) continue;
        TimeWindowRecord& rec = out[w.t];
        if (!w.has_first_feasible) continue;
        rec.any_feasible = true;
        rec.first_feasible_f = w.first_feasible_f;
        rec.best_feasible_f = w.best_feasible.back().f;

        double fs = w.t < static_cast<int>(f_star.size()) ? f_star[w.t] : kNaN;
        if (std::isnan(fs)) continue; // absent optimum: the window cannot succeed
        for (const auto& e : w.best_feasible) {
            if (std::abs(e.f - fs) <= precision) {
                rec.success = true;
                rec.evals_to_first_success = e.eval;
                break;
            }
        }
    }
    return out;
}

double offline_error(const RunTrace& trace, const std::vector<double>& f_star) {
    if (trace.rows.empty()) return kNaN;
    double sum = 0.0;
    for (const auto& row : trace.rows) {
        if (row.t < 0 || row.t >= static_cast<int>(f_star.size()) || std::isnan(f_star[row.t]))
            return kNaN;
        double reference = std::isnan(row.best_f) ? row.worst_f : row.best_f;
        sum += std::abs(f_star[row.t] - reference);
    }
    return sum / static_cast<double>(trace.rows.size());
}

double offline_error_unmodified(const RunTrace& trace, const std::vector<double>& f_star) {
    if (trace.rows.empty() || trace.fc <= 0) return kNaN;
    double sum = 0.0;
    for (const auto& row : trace.rows) {
        if (row.t < 0 || row.t >= static_cast<int>(f_star.size()) || std::isnan(f_star[row.t]))
            return kNaN;
        // window-best regardless of feasibility, recovered from the best-any
        // events (1-based within their window) up to this row's evaluations
        double best = kNaN;
        if (row.t < static_cast<int>(trace.windows.size())) {
            for (const auto& e : trace.windows[row.t].best_any) {
                long long abs_eval = e.eval + static_cast<long long>(row.t) * trace.fc;
                if (abs_eval > row.evaluations) break;
                best = e.f;
            }
        }
        double reference = std::isnan(best) ? row.worst_f : best;
        sum += std::abs(f_star[row.t] - reference);
    }
    return sum / static_cast<double>(trace.rows.size());
}

double feasibility_ratio(const std::vector<TimeWindowRecord>& windows, int total_times) {
    if (total_times <= 0) return kNaN;
    int n = 0;
    for (const auto& w : windows)
        if (w.any_feasible) ++n;
    return static_cast<double>(n) / total_times;
}

double success_ratio(const std::vector<TimeWindowRecord>& windows, int total_times) {
    if (total_times <= 0) return kNaN;
    int n = 0;
    for (const auto& w : windows)
        if (w.success) ++n;
    return static_cast<double>(n) / total_times;
}

double average_evaluations(const std::vector<TimeWindowRecord>& windows) {
    double sum = 0.0;
    int n = 0;
    for (const auto& w : windows) {
        if (!w.success) continue;
        sum += static_cast<double>(w.evals_to_first_success);
        ++n;
    }
    return n == 0 ? kNaN : sum / n;
}

double convergence_score(double ae, double sr) {
    if (std::isnan(ae) || std::isnan(sr) || sr == 0.0) return kNaN;
    return ae / sr;
}

double progress_ratio_window(double f_first, double f_best) {
    if (f_best > 0.0) return std::abs(std::log(std::sqrt(f_first / f_best)));
    if (f_best == 0.0) return std::abs(std::log(std::sqrt((f_first + 1.0) / (f_best + 1.0))));
    double shift = 2.0 * std::abs(f_best);
    return std::abs(std::log(std::sqrt((f_first + shift) / (f_best + shift))));
}

double progress_ratio(const std::vector<TimeWindowRecord>& windows) {
    double sum = 0.0;
    int n = 0;
    for (const auto& w : windows) {
        if (!w.any_feasible) continue;
        sum += progress_ratio_window(w.first_feasible_f, w.best_feasible_f);
        ++n;
    }
    return n == 0 ? kNaN : sum / n;
}

RunMeasures run_measures(const RunTrace& trace, const std::vector<double>& f_star,
                         int total_times) {
    RunMeasures m;
    auto windows = window_records(trace, f_star, total_times);
    m.m_off_e = offline_error(trace, f_star);
    m.m_off_e_unmodified = offline_error_unmodified(trace, f_star);
    m.fr = feasibility_ratio(windows, total_times);
    m.sr = success_ratio(windows, total_times);
    m.ae = average_evaluations(windows);
    m.cs = convergence_score(m.ae, m.sr);
    m.pr = progress_ratio(windows);
    return m;
}

Aggregate aggregate(const std::vector<double>& values) {
    Aggregate a;
    double sum = 0.0;
    for (double v : values) {
        if (std::isnan(v)) continue;
        sum += v;
        ++a.n;
    }
    if (a.n == 0) {
        a.mean = a.stddev = kNaN;
        return a;
    }
    a.mean = sum / a.n;
    double ss = 0.0;
    for (double v : values) {
        if (std::isnan(v)) continue;
        ss += (v - a.mean) * (v - a.mean);
    }
    a.stddev = a.n > 1 ? std::sqrt(ss / (a.n - 1)) : 0.0;
    return a;
}

MeasureReport aggregate_measures(const std::vector<RunMeasures>& runs) {
    auto collect = [&](auto field) {
        std::vector<double> v;
        v.reserve(runs.size());
        for (const auto& r : runs) v.push_back(field(r));
        return aggregate(v);
    };
    MeasureReport rep;
    rep.m_off_e = collect([](const RunMeasures& r) { return r.m_off_e; });
    rep.fr = collect([](const RunMeasures& r) { return r.fr; });
    rep.sr = collect([](const RunMeasures& r) { return r.sr; });
    rep.ae = collect([](const RunMeasures& r) { return r.ae; });
    rep.cs = collect([](const RunMeasures& r) { return r.cs; });
    rep.pr = collect([](const RunMeasures& r) { return r.pr; });
    return rep;
}

} // namespace dcop
