#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "dcop/measures.hpp"

using namespace dcop;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Hand-constructed three-window trace exercising the modified-error
// substitution, the success bookkeeping and all three progress-ratio cases.
RunTrace golden_trace() {
    RunTrace trace;
    trace.fc = 100;
    trace.total_evaluations = 300;
    trace.windows.resize(3);

    const double e2 = 7.38905609893065; // e^2

    auto& w0 = trace.windows[0];
    w0.t = 0;
    w0.has_first_feasible = true;
    w0.first_feasible_eval = 10;
    w0.first_feasible_f = -1.0;
    w0.best_feasible = {{10, -1.0, {}}, {50, -2.0, {}}};
    w0.best_any = {{2, 5.0, {}}, {10, -1.0, {}}, {50, -2.0, {}}};

    auto& w1 = trace.windows[1];
    w1.t = 1;
    w1.has_first_feasible = true;
    w1.first_feasible_eval = 5;
    w1.first_feasible_f = e2 - 1.0;
    w1.best_feasible = {{5, e2 - 1.0, {}}, {70, 0.0, {}}};
    w1.best_any = w1.best_feasible;

    auto& w2 = trace.windows[2];
    w2.t = 2;
    w2.has_first_feasible = true;
    w2.first_feasible_eval = 1;
    w2.first_feasible_f = 2.0 * e2;
    w2.best_feasible = {{1, 2.0 * e2, {}}, {20, 2.0, {}}};
    w2.best_any = w2.best_feasible;

    auto row = [](int gen, long long evals, int t, double best_f, double worst_f) {
        GenerationRow r;
        r.generation = gen;
        r.evaluations = evals;
        r.t = t;
        r.best_f = best_f;
        r.best_phi = 0.0;
        r.worst_f = worst_f;
        return r;
    };
    trace.rows = {
        row(1, 50, 0, -1.0, 10.0),
        row(2, 100, 0, -2.0, 9.0),
        row(3, 103, 1, kNaN, 3.0), // no feasible solution yet: worst member substitutes
        row(4, 200, 1, 0.0, 8.0),
        row(5, 210, 2, 2.0 * e2, 20.0),
        row(6, 300, 2, 2.0, 20.0),
    };
    return trace;
}

const std::vector<double> kGoldenFStar{-5.0, 0.0, 2.0};

} // namespace

TEST_CASE("golden trace: all six measures are exact") {
    RunTrace trace = golden_trace();
    RunMeasures m = run_measures(trace, kGoldenFStar, 3);

    const double e2 = 7.38905609893065;
    double expected_off = (4.0 + 3.0 + 3.0 + 0.0 + std::abs(2.0 - 2.0 * e2) + 0.0) / 6.0;
    CHECK(m.m_off_e == doctest::Approx(expected_off).epsilon(1e-12));
    CHECK(m.fr == doctest::Approx(1.0));
    CHECK(m.sr == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(m.ae == doctest::Approx(45.0)); // successes at evaluations 70 and 20
    CHECK(m.cs == doctest::Approx(67.5)); // 45 / (2/3)
    double pr0 = 0.5 * std::log(1.5);
    CHECK(m.pr == doctest::Approx((pr0 + 1.0 + 1.0) / 3.0).epsilon(1e-12));
}

TEST_CASE("golden trace: window records carry the success evaluations") {
    RunTrace trace = golden_trace();
    auto windows = window_records(trace, kGoldenFStar, 3);
    REQUIRE(windows.size() == 3);
    CHECK_FALSE(windows[0].success);
    CHECK(windows[0].any_feasible);
    CHECK(windows[1].success);
    CHECK(windows[1].evals_to_first_success == 70);
    CHECK(windows[2].success);
    CHECK(windows[2].evals_to_first_success == 20);
}

TEST_CASE("event-based measures ignore the generation rows") {
    RunTrace trace = golden_trace();
    RunMeasures full = run_measures(trace, kGoldenFStar, 3);
    trace.rows.clear(); // offline error needs rows; the rest must not
    auto windows = window_records(trace, kGoldenFStar, 3);
    CHECK(feasibility_ratio(windows, 3) == full.fr);
    CHECK(success_ratio(windows, 3) == full.sr);
    CHECK(average_evaluations(windows) == full.ae);
    CHECK(progress_ratio(windows) == full.pr);
}

TEST_CASE("offline error arithmetic examples") {
    RunTrace trace;
    trace.fc = 10;
    trace.windows.resize(1);
    trace.windows[0].t = 0;
    auto row = [](int gen, double best_f, double worst_f) {
        GenerationRow r;
        r.generation = gen;
        r.evaluations = gen;
        r.t = 0;
        r.best_f = best_f;
        r.worst_f = worst_f;
        return r;
    };
    // error sequence 1.0, 0.5, 0.0 around f* = 2
    trace.rows = {row(1, 3.0, 9.0), row(2, 2.5, 9.0), row(3, 2.0, 9.0)};
    CHECK(offline_error(trace, {2.0}) == doctest::Approx(0.5));

    // best always feasible and equal to f*: perfect performance
    trace.rows = {row(1, 2.0, 9.0), row(2, 2.0, 9.0)};
    CHECK(offline_error(trace, {2.0}) == doctest::Approx(0.0));

    // infeasible generation substitutes the worst member: f* + 3 contributes 3
    trace.rows = {row(1, kNaN, 5.0)};
    CHECK(offline_error(trace, {2.0}) == doctest::Approx(3.0));

    // absent optimum makes the measure undefined
    trace.rows = {row(1, 2.0, 5.0)};
    CHECK(std::isnan(offline_error(trace, {kNaN})));
}

TEST_CASE("ratio examples") {
    std::vector<TimeWindowRecord> windows(10);
    for (int i = 0; i < 10; ++i) {
        windows[i].t = i;
        windows[i].any_feasible = i < 8;
    }
    CHECK(feasibility_ratio(windows, 10) == doctest::Approx(0.8));
    CHECK(success_ratio(windows, 10) == doctest::Approx(0.0));
    for (auto& w : windows) w.any_feasible = true;
    CHECK(feasibility_ratio(windows, 10) == doctest::Approx(1.0));
}

TEST_CASE("average evaluations and convergence score") {
    std::vector<TimeWindowRecord> windows(3);
    windows[0].success = true;
    windows[0].evals_to_first_success = 100;
    windows[1].success = true;
    windows[1].evals_to_first_success = 300;
    CHECK(average_evaluations(windows) == doctest::Approx(200.0));

    // success on the window's first evaluation contributes 1
    std::vector<TimeWindowRecord> first(1);
    first[0].success = true;
    first[0].evals_to_first_success = 1;
    CHECK(average_evaluations(first) == doctest::Approx(1.0));

    std::vector<TimeWindowRecord> none(4);
    CHECK(std::isnan(average_evaluations(none)));

    CHECK(convergence_score(500.0, 0.5) == doctest::Approx(1000.0));
    CHECK(std::isnan(convergence_score(500.0, 0.0)));
    CHECK(std::isnan(convergence_score(kNaN, 0.5)));
    CHECK(convergence_score(126.92, 126.92 / 325.0) == doctest::Approx(325.0));
}

TEST_CASE("progress ratio sign cases") {
    const double e2 = 7.38905609893065;
    CHECK(progress_ratio_window(3.0 * e2, 3.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(progress_ratio_window(5.0, 5.0) == doctest::Approx(0.0));
    // third case: f_best = -2, f_first = -1 -> |ln sqrt(3/2)|
    CHECK(progress_ratio_window(-1.0, -2.0) ==
          doctest::Approx(std::abs(std::log(std::sqrt(1.5)))).epsilon(1e-12));
    // second case: f_best = 0
    CHECK(progress_ratio_window(e2 - 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("windows without feasible solutions are excluded from the progress ratio") {
    std::vector<TimeWindowRecord> windows(3);
    windows[0].any_feasible = true;
    windows[0].first_feasible_f = 4.0;
    windows[0].best_feasible_f = 4.0;
    CHECK(progress_ratio(windows) == doctest::Approx(0.0));
    windows[0].any_feasible = false;
    CHECK(std::isnan(progress_ratio(windows)));
}

TEST_CASE("success requires feasibility: SR never exceeds FR") {
    RunTrace trace = golden_trace();
    RunMeasures m = run_measures(trace, kGoldenFStar, 3);
    CHECK(m.sr <= m.fr);
    // and CS recomputes exactly from AE and SR whenever defined
    CHECK(m.cs == doctest::Approx(m.ae / m.sr));
}

TEST_CASE("aggregation excludes undefined runs and reports counts") {
    Aggregate a = aggregate({1.0, 2.0, 3.0, kNaN});
    CHECK(a.n == 3);
    CHECK(a.mean == doctest::Approx(2.0));
    CHECK(a.stddev == doctest::Approx(1.0));
    Aggregate empty = aggregate({kNaN, kNaN});
    CHECK(empty.n == 0);
    CHECK(std::isnan(empty.mean));

    std::vector<RunMeasures> runs(2);
    runs[0].ae = kNaN;
    runs[1].ae = 40.0;
    runs[0].m_off_e = 0.5;
    runs[1].m_off_e = 1.5;
    MeasureReport rep = aggregate_measures(runs);
    CHECK(rep.ae.n == 1);
    CHECK(rep.ae.mean == doctest::Approx(40.0));
    CHECK(rep.m_off_e.mean == doctest::Approx(1.0));
}

TEST_CASE("absent optimum marks the window failed but keeps feasibility") {
    RunTrace trace = golden_trace();
    std::vector<double> fstar{-5.0, kNaN, 2.0};
    auto windows = window_records(trace, fstar, 3);
    CHECK(windows[1].any_feasible);
    CHECK_FALSE(windows[1].success);
    CHECK(std::isnan(offline_error(trace, fstar)));
}
