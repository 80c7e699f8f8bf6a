#include "dcop/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace dcop {

namespace {

struct RankedData {
    std::vector<double> mean_ranks; // per group
    std::vector<long long> sizes;
    long long n = 0;
    double tie_sum = 0; // sum over tie groups of (t^3 - t)
};

RankedData joint_ranks(const std::vector<SampleGroup>& groups) {
    RankedData rd;
    std::vector<std::pair<double, int>> all; // (value, group)
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].values.empty()) throw std::invalid_argument("stats: empty group");
        rd.sizes.push_back(static_cast<long long>(groups[g].values.size()));
        for (double v : groups[g].values) {
            if (!std::isfinite(v)) throw std::invalid_argument("stats: non-finite value");
            all.emplace_back(v, static_cast<int>(g));
        }
    }
    rd.n = static_cast<long long>(all.size());
    std::sort(all.begin(), all.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<double> rank_sum(groups.size(), 0.0);
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].first == all[i].first) ++j;
        double t = static_cast<double>(j - i);
        double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) rank_sum[all[k].second] += midrank;
        if (t > 1) rd.tie_sum += t * t * t - t;
        i = j;
    }
    rd.mean_ranks.resize(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g)
        rd.mean_ranks[g] = rank_sum[g] / static_cast<double>(rd.sizes[g]);
    return rd;
}

} // namespace

KruskalResult kruskal_wallis(const std::vector<SampleGroup>& groups) {
    if (groups.size() < 2) throw std::invalid_argument("kruskal_wallis: need >= 2 groups");
    for (const auto& g : groups)
        if (g.values.size() < 2)
            throw std::invalid_argument("kruskal_wallis: each group needs >= 2 values");

    RankedData rd = joint_ranks(groups);
    const double n = static_cast<double>(rd.n);
    double h = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        double dev = rd.mean_ranks[g] - (n + 1.0) / 2.0;
        h += static_cast<double>(rd.sizes[g]) * dev * dev;
    }
    h *= 12.0 / (n * (n + 1.0));

    double correction = 1.0 - rd.tie_sum / (n * n * n - n);
    if (correction <= 0.0) return {0.0, 1.0}; // every value identical
    h /= correction;

    boost::math::chi_squared chi2(static_cast<double>(groups.size() - 1));
    double p = boost::math::cdf(boost::math::complement(chi2, h));
    return {h, p};
}

ComparisonResult posthoc_bonferroni(const std::vector<SampleGroup>& groups, double alpha) {
    KruskalResult omnibus = kruskal_wallis(groups);
    RankedData rd = joint_ranks(groups);
    const std::size_t k = groups.size();
    const double n = static_cast<double>(rd.n);
    const double pairs = static_cast<double>(k * (k - 1) / 2);

    ComparisonResult res;
    res.h = omnibus.h;
    res.p = omnibus.p;
    res.mean_ranks = rd.mean_ranks;
    res.adjusted_p.assign(k, std::vector<double>(k, 1.0));
    res.relation.assign(k, std::vector<Dominance>(k, Dominance::NoDifference));

    double var_base = n * (n + 1.0) / 12.0 - rd.tie_sum / (12.0 * (n - 1.0));
    if (var_base <= 0.0) return res; // degenerate: all values tied

    boost::math::normal gauss;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            double se = std::sqrt(var_base * (1.0 / rd.sizes[i] + 1.0 / rd.sizes[j]));
            double z = (rd.mean_ranks[i] - rd.mean_ranks[j]) / se;
            double raw = 2.0 * boost::math::cdf(boost::math::complement(gauss, std::abs(z)));
            double adj = std::min(1.0, raw * pairs);
            res.adjusted_p[i][j] = res.adjusted_p[j][i] = adj;
            if (omnibus.p < alpha && adj < alpha) {
                // lower mean rank means lower error, which outperforms
                if (rd.mean_ranks[i] < rd.mean_ranks[j]) {
                    res.relation[i][j] = Dominance::Outperforms;
                    res.relation[j][i] = Dominance::DominatedBy;
                } else {
                    res.relation[i][j] = Dominance::DominatedBy;
                    res.relation[j][i] = Dominance::Outperforms;
                }
            }
        }
    }
    return res;
}

double ks_normality(const std::vector<double>& values) {
    if (values.size() < 5) throw std::invalid_argument("ks_normality: need >= 5 values");
    const double n = static_cast<double>(values.size());
    double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    double sd = std::sqrt(ss / (n - 1.0));
    if (sd == 0.0) return 0.0; // degenerate distribution

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    boost::math::normal gauss(mean, sd);
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double cdf = boost::math::cdf(gauss, sorted[i]);
        d = std::max(d, std::abs(cdf - static_cast<double>(i + 1) / n));
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    }

    // Parameters come from the sample, so the plain Kolmogorov distribution
    // is far too conservative; use the Dallal-Wilkinson approximation of the
    // Lilliefors p-value, with Stephens' form for large p.
    double nd = n > 100.0 ? 100.0 : n;
    double kd = n > 100.0 ? d * std::pow(n / 100.0, 0.49) : d;
    double p = std::exp(-7.01256 * kd * kd * (nd + 2.78019) +
                        2.99587 * kd * std::sqrt(nd + 2.78019) - 0.122119 +
                        0.974598 / std::sqrt(nd) + 1.67997 / nd);
    if (p > 0.1) {
        double kk = (std::sqrt(n) - 0.01 + 0.85 / std::sqrt(n)) * d;
        if (kk <= 0.302) p = 1.0;
        else if (kk <= 0.5)
            p = 2.76773 - 19.828315 * kk + 80.709644 * kk * kk - 138.55152 * kk * kk * kk +
                81.218052 * kk * kk * kk * kk;
        else if (kk <= 0.9)
            p = -4.901232 + 40.662806 * kk - 97.490286 * kk * kk + 94.029866 * kk * kk * kk -
                32.355711 * kk * kk * kk * kk;
        else if (kk <= 1.31)
            p = 6.198765 - 19.558097 * kk + 23.186922 * kk * kk - 12.234627 * kk * kk * kk +
                2.423045 * kk * kk * kk * kk;
        else
            p = 0.0;
    }
    return std::clamp(p, 0.0, 1.0);
}

} // namespace dcop
