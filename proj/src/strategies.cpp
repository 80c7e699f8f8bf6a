#include "dcop/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace dcop {

int deb_compare(const Individual& a, const Individual& b) {
    if (a.feasible && b.feasible) {
        if (a.f < b.f) return -1;
        if (b.f < a.f) return +1;
        return 0;
    }
    if (a.feasible) return -1;
    if (b.feasible) return +1;
    if (a.phi < b.phi) return -1;
    if (b.phi < a.phi) return +1;
    return 0;
}

bool eps_less(const Individual& a, const Individual& b, double eps) {
    if ((a.phi <= eps && b.phi <= eps) || a.phi == b.phi) return a.f < b.f;
    return a.phi < b.phi;
}

bool eps_leq(const Individual& a, const Individual& b, double eps) {
    if ((a.phi <= eps && b.phi <= eps) || a.phi == b.phi) return a.f <= b.f;
    return a.phi < b.phi;
}

void EpsilonState::seed_from(std::span<const Individual> pop) {
    generation = 0;
    if (pop.empty()) {
        eps0 = eps = 0.0;
        return;
    }
    std::vector<double> phis(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) phis[i] = pop[i].phi;
    auto theta = static_cast<std::size_t>(
        std::ceil(theta_frac * static_cast<double>(pop.size())));
    theta = std::clamp<std::size_t>(theta, 1, pop.size());
    std::nth_element(phis.begin(), phis.begin() + (theta - 1), phis.end());
    eps0 = phis[theta - 1];
    eps = eps0;
}

double EpsilonState::advance() {
    ++generation;
    if (generation >= tc) {
        eps = 0.0;
    } else {
        eps = eps0 * std::pow(1.0 - static_cast<double>(generation) / tc, cp);
    }
    return eps;
}

double eps_update(EpsilonState& state, std::span<const Individual> pop) {
    if (state.generation == 0) state.seed_from(pop);
    return state.advance();
}

std::vector<int> sr_sort(std::span<const Individual> pop, double pf, Xoshiro& rng) {
    const int n = static_cast<int>(pop.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int sweep = 0; sweep < n; ++sweep) {
        bool swapped = false;
        for (int j = 0; j + 1 < n; ++j) {
            const Individual& a = pop[order[j]];
            const Individual& b = pop[order[j + 1]];
            double u = rng.uniform();
            if ((a.feasible && b.feasible) || u < pf) {
                if (a.f > b.f) {
                    std::swap(order[j], order[j + 1]);
                    swapped = true;
                }
            } else if (a.phi > b.phi) {
                std::swap(order[j], order[j + 1]);
                swapped = true;
            }
        }
        if (!swapped) break;
    }
    return order;
}

void Strategy::select(std::vector<Individual>& members, std::vector<Individual>& trials,
                      Xoshiro& /*rng*/) {
    if (members.size() != trials.size())
        throw std::invalid_argument("select: target/trial size mismatch");
    for (std::size_t i = 0; i < members.size(); ++i)
        if (prefer_trial(members[i], trials[i])) members[i] = std::move(trials[i]);
}

namespace {

// Replacement follows the classic rule: the trial also wins exact ties.
// On flat stretches (a dynamic objective passing through zero) tie acceptance
// keeps the population moving; rejecting ties freezes it into an absorbing
// state that can never re-enter a moved feasible region.

class PenaltyStrategy final : public Strategy {
public:
    explicit PenaltyStrategy(double factor) : factor_(factor) {}
    std::string_view name() const override { return "penalty"; }
    bool prefer_trial(const Individual& target, const Individual& trial) const override {
        return penalized_fitness(trial.f, trial.phi, factor_) <=
               penalized_fitness(target.f, target.phi, factor_);
    }

private:
    double factor_;
};

class FeasibilityStrategy final : public Strategy {
public:
    std::string_view name() const override { return "feasibility"; }
    bool prefer_trial(const Individual& target, const Individual& trial) const override {
        return deb_compare(trial, target) <= 0;
    }
};

class EpsilonStrategy final : public Strategy {
public:
    EpsilonStrategy(const StrategyParams& p, int tc) {
        state_.cp = p.cp;
        state_.theta_frac = p.theta_frac;
        state_.tc = std::max(1, tc);
    }
    std::string_view name() const override { return "epsilon"; }
    void on_window_start(std::span<const Individual> pop) override { state_.seed_from(pop); }
    void on_generation_end(std::span<const Individual> /*pop*/) override { state_.advance(); }
    bool prefer_trial(const Individual& target, const Individual& trial) const override {
        return eps_leq(trial, target, state_.eps);
    }
    double current_eps() const { return state_.eps; }

private:
    EpsilonState state_;
};

class StochasticStrategy final : public Strategy {
public:
    explicit StochasticStrategy(double pf) : pf_(pf) {
        if (pf < 0.0 || pf >= 0.5)
            std::fprintf(stderr, "stochastic ranking: Pf=%g outside [0, 0.5)\n", pf);
    }
    std::string_view name() const override { return "stochastic"; }
    bool prefer_trial(const Individual& target, const Individual& trial) const override {
        return trial.f <= target.f;
    }
    void select(std::vector<Individual>& members, std::vector<Individual>& trials,
                Xoshiro& rng) override {
        if (members.size() != trials.size())
            throw std::invalid_argument("select: target/trial size mismatch");
        std::vector<Individual> pool;
        pool.reserve(members.size() * 2);
        for (auto& m : members) pool.push_back(std::move(m));
        for (auto& u : trials) pool.push_back(std::move(u));
        auto order = sr_sort(pool, pf_, rng);
        std::vector<Individual> next;
        next.reserve(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) next.push_back(std::move(pool[order[i]]));
        members = std::move(next);
    }

private:
    double pf_;
};

} // namespace

std::unique_ptr<Strategy> make_strategy(std::string_view name, const StrategyParams& params,
                                        int np, int evals_per_generation, int fc) {
    if (name == "penalty") return std::make_unique<PenaltyStrategy>(params.penalty_factor);
    if (name == "feasibility") return std::make_unique<FeasibilityStrategy>();
    if (name == "epsilon") {
        double gens_per_window =
            static_cast<double>(fc) / std::max(1, evals_per_generation);
        int tc = std::max(1, static_cast<int>(std::lround(params.tc_frac * gens_per_window)));
        return std::make_unique<EpsilonStrategy>(params, tc);
    }
    if (name == "stochastic") return std::make_unique<StochasticStrategy>(params.pf);
    (void)np;
    throw std::invalid_argument("unknown strategy: " + std::string(name));
}

} // namespace dcop
