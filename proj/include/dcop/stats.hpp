#ifndef DCOP_STATS_HPP
#define DCOP_STATS_HPP

#include <string>
#include <vector>

namespace dcop {

struct SampleGroup {
    std::string label;
    std::vector<double> values;
};

struct KruskalResult {
    double h = 0;
    double p = 1;
};

/// Rank-based Kruskal-Wallis H with midrank tie correction; p from the
/// chi-square approximation with (k-1) degrees of freedom. All values
/// identical across groups gives H = 0, p = 1.
KruskalResult kruskal_wallis(const std::vector<SampleGroup>& groups);

/// Pairwise verdicts at significance alpha. relation[i][j] records how group
/// i compares to group j.
enum class Dominance { NoDifference, Outperforms, DominatedBy };

struct ComparisonResult {
    double h = 0;
    double p = 1;
    std::vector<double> mean_ranks;
    std::vector<std::vector<double>> adjusted_p;        // Bonferroni-adjusted, capped at 1
    std::vector<std::vector<Dominance>> relation;       // antisymmetric
};

/// Dunn's test on the joint ranking with Bonferroni correction; pairs are
/// reported only when the omnibus test rejects. Lower values rank better
/// (groups hold error measures), so a significantly lower mean rank
/// outperforms.
ComparisonResult posthoc_bonferroni(const std::vector<SampleGroup>& groups, double alpha = 0.05);

/// One-sample Kolmogorov-Smirnov p-value against a normal with the sample's
/// mean and standard deviation. Diagnostic only.
double ks_normality(const std::vector<double>& values);

} // namespace dcop

#endif
