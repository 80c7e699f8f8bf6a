#ifndef DCOP_STRATEGIES_HPP
#define DCOP_STRATEGIES_HPP

#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "dcop/problem.hpp"
#include "dcop/rng.hpp"

namespace dcop {

/// Hyperparameters of the four constraint-handling techniques.
struct StrategyParams {
    double pf = 0.45;            // stochastic-ranking comparison probability
    double cp = 5.0;             // epsilon decay exponent
    double theta_frac = 0.2;     // epsilon level seeded from the theta-th best-by-violation
    double tc_frac = 0.2;        // epsilon cutoff as a fraction of generations per window
    double penalty_factor = 2.5;
    double eq_tolerance = 1e-4;
};

/// f + factor * phi; selection under the penalty technique compares these
/// scalars only.
inline double penalized_fitness(double f, double phi, double factor = 2.5) {
    return f + factor * phi;
}

/// Deb's feasibility rules. Returns -1 when a is preferred, +1 when b is
/// preferred, 0 on an exact tie (callers keep the incumbent on ties).
int deb_compare(const Individual& a, const Individual& b);

/// Epsilon-level comparisons between (f, phi) pairs: violations at or below
/// eps compare by objective value, otherwise by violation.
bool eps_less(const Individual& a, const Individual& b, double eps);
bool eps_leq(const Individual& a, const Individual& b, double eps);

/// Epsilon level schedule: eps0 * (1 - G/Tc)^cp until the cutoff generation,
/// zero afterwards; re-seeded at every window start.
struct EpsilonState {
    double eps0 = 0.0;
    double eps = 0.0;
    int tc = 1;
    double cp = 5.0;
    double theta_frac = 0.2;
    int generation = 0; // within the current window

    /// Window start: eps0 is the violation of the theta-th best-by-violation
    /// member, theta = ceil(theta_frac * NP).
    void seed_from(std::span<const Individual> pop);
    /// Advance one generation and return the new level.
    double advance();
};

/// Once-per-generation update (seeds the level when called at a window start).
double eps_update(EpsilonState& state, std::span<const Individual> pop);

/// Stochastic-ranking bubble sort (NP sweeps of adjacent comparisons with a
/// fresh uniform draw per comparison, early exit on a swap-free sweep).
/// Returns the ordering as indices into pop, best first.
std::vector<int> sr_sort(std::span<const Individual> pop, double pf, Xoshiro& rng);

/// Survivor-selection policy shared by the four techniques. One instance is
/// owned by a single run; comparisons may be invoked from that run's thread
/// only.
class Strategy {
public:
    virtual ~Strategy() = default;
    virtual std::string_view name() const = 0;

    /// Called after the population has been (re-)evaluated at a new time.
    virtual void on_window_start(std::span<const Individual> /*pop*/) {}
    /// Called once per completed generation.
    virtual void on_generation_end(std::span<const Individual> /*pop*/) {}

    /// True when the trial strictly displaces its target; exact ties keep the
    /// incumbent.
    virtual bool prefer_trial(const Individual& target, const Individual& trial) const = 0;

    /// Survivor selection. The default keeps positions and applies
    /// prefer_trial pairwise; stochastic ranking replaces the population with
    /// the NP best of the 2NP union.
    virtual void select(std::vector<Individual>& members, std::vector<Individual>& trials,
                        Xoshiro& rng);
};

/// Factory for "penalty" | "feasibility" | "epsilon" | "stochastic".
/// fc and the per-generation evaluation count fix the epsilon cutoff Tc.
std::unique_ptr<Strategy> make_strategy(std::string_view name, const StrategyParams& params,
                                        int np, int evals_per_generation, int fc);

} // namespace dcop

#endif
