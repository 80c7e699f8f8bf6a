#include "dcop/problem.hpp"

#include <algorithm>
#include <cmath>

namespace dcop {

double violation_sum(std::span<const double> g, std::span<const double> h, ViolationContext& ctx) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double v = std::max(0.0, g[i]);
        ctx.max_g[i] = std::max(ctx.max_g[i], v);
        sum += v / std::max(ctx.max_g[i], 1.0);
    }
    for (std::size_t j = 0; j < h.size(); ++j) {
        double v = std::max(0.0, std::abs(h[j]) - ctx.eq_tolerance);
        ctx.max_h[j] = std::max(ctx.max_h[j], v);
        sum += v / std::max(ctx.max_h[j], 1.0);
    }
    return sum;
}

double raw_violation_sum(std::span<const double> g, std::span<const double> h, double eq_tolerance) {
    double sum = 0.0;
    for (double gi : g) sum += std::max(0.0, gi);
    for (double hj : h) sum += std::max(0.0, std::abs(hj) - eq_tolerance);
    return sum;
}

namespace {

void constraint_values(const DynamicProblem& problem, std::span<const double> x, int t,
                       std::vector<double>& g, std::vector<double>& h) {
    g.resize(problem.inequality.size());
    h.resize(problem.equality.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = problem.inequality[i](x, t);
    for (std::size_t j = 0; j < h.size(); ++j) h[j] = problem.equality[j](x, t);
}

} // namespace

std::optional<Individual> evaluate(const DynamicProblem& problem, std::span<const double> x,
                                   EvaluationClock& clock, ViolationContext& ctx) {
    if (!problem.in_bounds(x)) throw std::invalid_argument("evaluate: x out of bounds");
    if (clock.exhausted()) return std::nullopt;

    int t = clock.consume();

    Individual ind;
    ind.x.assign(x.begin(), x.end());
    ind.f = problem.objective(x, t);
    std::vector<double> g, h;
    constraint_values(problem, x, t, g, h);
    ind.raw_violation = raw_violation_sum(g, h, ctx.eq_tolerance);
    ind.phi = violation_sum(g, h, ctx);
    ind.feasible = ind.raw_violation == 0.0;
    ind.eval_time = t;
    return ind;
}

Individual evaluate_at(const DynamicProblem& problem, std::span<const double> x, int t,
                       double eq_tolerance) {
    Individual ind;
    ind.x.assign(x.begin(), x.end());
    ind.f = problem.objective(x, t);
    std::vector<double> g, h;
    constraint_values(problem, x, t, g, h);
    ind.raw_violation = raw_violation_sum(g, h, eq_tolerance);
    ind.phi = ind.raw_violation;
    ind.feasible = ind.raw_violation == 0.0;
    ind.eval_time = t;
    return ind;
}

} // namespace dcop
