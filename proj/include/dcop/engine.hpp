#ifndef DCOP_ENGINE_HPP
#define DCOP_ENGINE_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dcop/problem.hpp"
#include "dcop/rng.hpp"
#include "dcop/strategies.hpp"

namespace dcop {

enum class BoundPolicy { ResampleUniform, Reflect, Clamp };

BoundPolicy bound_policy_from_string(std::string_view name);

/// DE/rand/1/bin configuration.
struct DEConfig {
    int np = 20;
    double f_lo = 0.2, f_hi = 0.8; // scale factor drawn per trial vector
    double cr = 0.2;
    std::uint64_t seed = 1;
    std::vector<int> sentinel_indices{0, 9}; // {1, NP/2} in 1-based terms
    BoundPolicy bound_policy = BoundPolicy::ResampleUniform;

    void validate() const;
    /// Evaluations per generation: one trial per member plus the sentinel
    /// re-evaluations.
    int evals_per_generation() const { return np + static_cast<int>(sentinel_indices.size()); }
};

struct Population {
    std::vector<Individual> members;
    int generation = 0;
};

/// One trace row per completed generation.
struct GenerationRow {
    int generation = 0;
    long long evaluations = 0; // total consumed so far
    int t = 0;                 // time index of the row's last evaluation
    double best_f = 0;         // best feasible objective seen in the current window (NaN if none)
    double best_phi = 0;       // smallest violation in the current population
    double worst_f = 0;        // worst objective in the current population
    bool change_detected = false;
};

/// Evaluation-resolution events for one time window.
struct WindowLog {
    int t = 0;
    bool has_first_feasible = false;
    long long first_feasible_eval = 0; // 1-based within the window
    double first_feasible_f = 0;

    struct Event {
        long long eval = 0; // 1-based within the window
        double f = 0;
        std::vector<double> x;
    };
    std::vector<Event> best_feasible;  // improvements of the window-best feasible objective
    std::vector<Event> best_any;       // improvements ignoring feasibility (diagnostic)
};

/// Everything recorded from one seeded run.
struct RunTrace {
    std::vector<GenerationRow> rows;
    std::vector<WindowLog> windows; // indexed by t
    long long total_evaluations = 0;
    int changes_detected = 0;
    int fc = 0; // window length in evaluations
    std::uint64_t seed = 0;

    void save(std::ostream& os) const;
    static RunTrace load(std::istream& is);
};

/// v = x_r0 + F (x_r1 - x_r2) with r0, r1, r2 distinct and != i.
std::vector<double> mutate(const Population& pop, int i, double f, Xoshiro& rng);

/// Binomial crossover; at least one component always comes from the mutant.
std::vector<double> crossover(std::span<const double> target, std::span<const double> mutant,
                              double cr, Xoshiro& rng);

/// Returns a vector inside [lower, upper]; in-bounds components untouched.
std::vector<double> repair_bounds(std::vector<double> v, std::span<const double> lower,
                                  std::span<const double> upper, BoundPolicy policy, Xoshiro& rng);

/// Full DE/rand/1/bin loop with sentinel-based change detection. Deterministic
/// given cfg.seed; consumes the clock until exhaustion.
RunTrace run(const DynamicProblem& problem, Strategy& strategy, const DEConfig& cfg,
             EvaluationClock& clock);

} // namespace dcop

#endif
