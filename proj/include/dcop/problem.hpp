#ifndef DCOP_PROBLEM_HPP
#define DCOP_PROBLEM_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace dcop {

/// A dynamic constrained optimization problem: minimize f(x, t) subject to
/// g_i(x, t) <= 0, h_j(x, t) == 0 and box bounds, where t is a discrete
/// time index driven by the evaluation counter.
struct DynamicProblem {
    using TimeFn = std::function<double(std::span<const double>, int)>;

    int dimension = 0;
    std::vector<double> lower, upper;
    TimeFn objective;
    std::vector<TimeFn> inequality; // g_i(x, t) <= 0
    std::vector<TimeFn> equality;   // h_j(x, t) == 0

    double objective_severity = 0.5; // k
    int constraint_severity = 20;    // S
    int change_frequency = 1000;     // fc, evaluations per time step
    bool has_dynamic_constraints = false;

    void validate() const {
        if (dimension <= 0 || !objective) throw std::invalid_argument("problem: bad definition");
        if (static_cast<int>(lower.size()) != dimension || static_cast<int>(upper.size()) != dimension)
            throw std::invalid_argument("problem: bounds size mismatch");
        for (int i = 0; i < dimension; ++i)
            if (!(lower[i] < upper[i])) throw std::invalid_argument("problem: lower >= upper");
        if (change_frequency <= 0) throw std::invalid_argument("problem: fc must be positive");
    }

    bool in_bounds(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != dimension) return false;
        for (int i = 0; i < dimension; ++i)
            if (x[i] < lower[i] || x[i] > upper[i]) return false;
        return true;
    }
};

/// Decision vector with its cached evaluation results.
struct Individual {
    std::vector<double> x;
    double f = 0.0;
    double phi = 0.0;           // normalized constraint-violation sum
    double raw_violation = 0.0; // unnormalized sum, pure in (x, t)
    bool feasible = false;
    int eval_time = -1;         // t at which f/phi were computed
};

/// Converts the evaluation counter into the discrete time index.
/// t = floor(total/fc); the evaluation that lands exactly on a multiple of
/// fc still belongs to the old time step.
class EvaluationClock {
public:
    EvaluationClock(int fc, int max_times) : fc_(fc), max_times_(max_times) {
        if (fc <= 0 || max_times <= 0) throw std::invalid_argument("clock: fc and T must be positive");
    }

    bool exhausted() const { return total_ >= budget(); }
    long long budget() const { return static_cast<long long>(fc_) * max_times_; }
    long long total_evaluations() const { return total_; }
    int fc() const { return fc_; }
    int max_times() const { return max_times_; }

    /// Current time index; idempotent.
    int time_index() const { return static_cast<int>(total_ / fc_); }

    /// Consume one evaluation and return the time index it runs under
    /// (the pre-increment one).
    int consume() {
        int t = time_index();
        ++total_;
        return t;
    }

private:
    long long total_ = 0;
    int fc_;
    int max_times_;
};

/// Running per-constraint maxima used to normalize violation sums, plus the
/// equality tolerance. Maxima grow over the whole run: keeping the scale
/// stable across changes keeps the penalty pressure comparable between
/// windows.
struct ViolationContext {
    std::vector<double> max_g;
    std::vector<double> max_h;
    double eq_tolerance = 1e-4;

    ViolationContext() = default;
    ViolationContext(std::size_t m, std::size_t p, double tol = 1e-4)
        : max_g(m, 0.0), max_h(p, 0.0), eq_tolerance(tol) {}

    void reset() {
        max_g.assign(max_g.size(), 0.0);
        max_h.assign(max_h.size(), 0.0);
    }
};

/// Sum of normalized constraint violations. Updates the running maxima with
/// this point's raw violations first, then normalizes by max(maximum, 1).
/// Returns 0 exactly when the point is feasible.
double violation_sum(std::span<const double> g, std::span<const double> h, ViolationContext& ctx);

/// Unnormalized violation sum; a pure function of the constraint values.
double raw_violation_sum(std::span<const double> g, std::span<const double> h, double eq_tolerance);

/// Evaluates x at the clock's current time, consuming one evaluation.
/// Returns nullopt when the budget is exhausted (the engine's stop signal).
/// Throws on out-of-bounds input.
std::optional<Individual> evaluate(const DynamicProblem& problem, std::span<const double> x,
                                   EvaluationClock& clock, ViolationContext& ctx);

/// Clock-free evaluation at an explicit time index; used by probes, sampling
/// and tests. Does not touch any running maxima (phi is the raw sum here).
Individual evaluate_at(const DynamicProblem& problem, std::span<const double> x, int t,
                       double eq_tolerance = 1e-4);

} // namespace dcop

#endif
