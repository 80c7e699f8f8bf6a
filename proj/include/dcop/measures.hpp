#ifndef DCOP_MEASURES_HPP
#define DCOP_MEASURES_HPP

#include <vector>

#include "dcop/engine.hpp"

namespace dcop {

/// Success precision: a window counts as successful when a feasible solution
/// comes within this distance of the window's reference optimum.
inline constexpr double kSuccessPrecision = 1e-4;

/// Per-window summary of one run.
struct TimeWindowRecord {
    int t = 0;
    bool any_feasible = false;
    double first_feasible_f = 0;      // valid iff any_feasible
    double best_feasible_f = 0;       // valid iff any_feasible
    bool success = false;
    long long evals_to_first_success = 0; // valid iff success; 1-based in the window
};

/// Builds the T window records of a run from its trace and the per-time
/// reference optima (NaN entries mark absent optima; their windows cannot
/// succeed).
std::vector<TimeWindowRecord> window_records(const RunTrace& trace,
                                             const std::vector<double>& f_star, int total_times,
                                             double precision = kSuccessPrecision);

/// Modified offline error: per generation, the error of the window-best
/// feasible solution against f*(t), substituting the population's worst
/// member while the window has no feasible solution yet. NaN when an optimum
/// needed by the trace is absent.
double offline_error(const RunTrace& trace, const std::vector<double>& f_star);

/// Unmodified variant (diagnostic): error of the window-best solution,
/// feasible or not.
double offline_error_unmodified(const RunTrace& trace, const std::vector<double>& f_star);

/// Fraction of windows in which any feasible solution was found.
double feasibility_ratio(const std::vector<TimeWindowRecord>& windows, int total_times);

/// Fraction of windows in which a feasible solution reached the optimum
/// within the success precision.
double success_ratio(const std::vector<TimeWindowRecord>& windows, int total_times);

/// Mean evaluations-to-first-success over successful windows; NaN when the
/// run had no successful window.
double average_evaluations(const std::vector<TimeWindowRecord>& windows);

/// AE / SR; NaN when either is absent or SR is zero.
double convergence_score(double ae, double sr);

/// Log-ratio improvement from the first to the best feasible solution of a
/// window, case-split on the sign of the best value.
double progress_ratio_window(double f_first, double f_best);

/// Mean progress ratio over windows that found a feasible solution; NaN when
/// no window did.
double progress_ratio(const std::vector<TimeWindowRecord>& windows);

/// The six per-run measures.
struct RunMeasures {
    double m_off_e = 0;
    double fr = 0;
    double sr = 0;
    double ae = 0; // NaN when undefined
    double cs = 0; // NaN when undefined
    double pr = 0; // NaN when undefined
    double m_off_e_unmodified = 0; // diagnostic
};

RunMeasures run_measures(const RunTrace& trace, const std::vector<double>& f_star,
                         int total_times);

/// Mean/std aggregation across runs. NaN values are excluded; n reports how
/// many runs contributed (0 renders the aggregate NaN).
struct Aggregate {
    double mean = 0;
    double stddev = 0;
    int n = 0;
};

Aggregate aggregate(const std::vector<double>& values);

struct MeasureReport {
    Aggregate m_off_e, fr, sr, ae, cs, pr;
};

MeasureReport aggregate_measures(const std::vector<RunMeasures>& runs);

} // namespace dcop

#endif
