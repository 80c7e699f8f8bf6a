#ifndef DCOP_G24_HPP
#define DCOP_G24_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dcop/engine.hpp"
#include "dcop/problem.hpp"

namespace dcop {

/// The 14 constrained instances of the dynamic G24 test set.
enum class G24Id {
    G24_1, G24_f, G24_2, G24_3, G24_3b, G24_3f, G24_4, G24_5,
    G24_6a, G24_6b, G24_6c, G24_6d, G24_7, G24_8b,
};

constexpr int kG24Count = 14;

struct G24Info {
    G24Id id;
    std::string_view name;
    bool dynamic_constraints;
    bool dynamic_objective;
    // feasible-region percentage (static) or published range (dynamic),
    // as fractions of the box volume
    double feasible_lo;
    double feasible_hi;
};

const std::vector<G24Info>& g24_catalog();
const G24Info& g24_info(G24Id id);
std::string_view g24_name(G24Id id);
G24Id g24_from_name(std::string_view name);

/// Builds the dynamic problem for one instance. S must be one of {10, 20, 50}
/// (the harness restricts to the published severities); k > 0, fc > 0.
DynamicProblem make_instance(G24Id id, double k, int severity, int fc);

/// Fraction of uniformly sampled box points feasible at time t; deterministic
/// given the seed, identical between the serial and parallel paths.
double feasible_region_ratio(const DynamicProblem& problem, int t, long long n_samples,
                             std::uint64_t seed);
double feasible_region_ratio_serial(const DynamicProblem& problem, int t, long long n_samples,
                                    std::uint64_t seed);

/// Per-time reference optima computed by pooling independent DE runs, one
/// entry per time window.
struct OptimaEntry {
    double f_star;          // NaN when no feasible point was found
    std::vector<double> x;  // witness point (empty when absent)
    bool present() const;
};

struct OptimaTable {
    G24Id id;
    int severity = 0;
    std::vector<OptimaEntry> by_time;

    const OptimaEntry& at(int t) const;
    std::vector<double> f_star_by_time() const; // NaN for absent entries

    void save(std::ostream& os) const;
    static OptimaTable load(std::istream& is);
};

/// Best feasible objective per time window over `runs` independent seeded DE
/// runs (feasibility-rules selection), each with the full T*fc budget.
OptimaTable compute_oracle_optima(G24Id id, double k, int severity, int runs, const DEConfig& de,
                                  int fc, int max_times, std::uint64_t master_seed);

} // namespace dcop

#endif
