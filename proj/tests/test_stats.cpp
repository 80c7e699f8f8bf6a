#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dcop/rng.hpp"
#include "dcop/stats.hpp"

using namespace dcop;

namespace {

SampleGroup group(std::string label, std::vector<double> v) {
    return SampleGroup{std::move(label), std::move(v)};
}

} // namespace

TEST_CASE("kruskal-wallis on {1,2,3} vs {4,5,6} matches the reference values") {
    auto res = kruskal_wallis({group("a", {1, 2, 3}), group("b", {4, 5, 6})});
    CHECK(res.h == doctest::Approx(3.857142857).epsilon(1e-9));
    CHECK(res.p == doctest::Approx(0.049534613).epsilon(1e-6));
}

TEST_CASE("kruskal-wallis with ties matches the reference implementation") {
    auto res = kruskal_wallis(
        {group("a", {1.0, 2.0, 2.0, 3.0}), group("b", {2.0, 4.0, 5.0}), group("c", {5.0, 5.0, 6.0})});
    CHECK(res.h == doctest::Approx(6.324840764).epsilon(1e-9));
    CHECK(res.p == doctest::Approx(0.042323179).epsilon(1e-6));
}

TEST_CASE("identical groups give H = 0, p = 1") {
    auto res = kruskal_wallis({group("a", {2, 2, 2}), group("b", {2, 2, 2})});
    CHECK(res.h == 0.0);
    CHECK(res.p == 1.0);
}

TEST_CASE("rank statistics are invariant under strictly monotone transforms") {
    Xoshiro rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<SampleGroup> raw, mapped;
        for (int g = 0; g < 3; ++g) {
            SampleGroup a{"g", {}}, b{"g", {}};
            for (int i = 0; i < 12; ++i) {
                double v = rng.uniform(-2.0, 2.0) + g * 0.3;
                a.values.push_back(v);
                b.values.push_back(std::exp(v) + 7.0); // strictly increasing map
            }
            raw.push_back(a);
            mapped.push_back(b);
        }
        auto r1 = kruskal_wallis(raw);
        auto r2 = kruskal_wallis(mapped);
        CHECK(r1.h == doctest::Approx(r2.h).epsilon(1e-12));
        CHECK(r1.p == doctest::Approx(r2.p).epsilon(1e-12));
    }
}

TEST_CASE("permuting group order permutes but does not change the analysis") {
    std::vector<SampleGroup> g1{group("x", {1, 5, 3, 9}), group("y", {2, 8, 4, 6}),
                                group("z", {10, 11, 12, 13})};
    std::vector<SampleGroup> g2{g1[2], g1[0], g1[1]};
    auto r1 = posthoc_bonferroni(g1);
    auto r2 = posthoc_bonferroni(g2);
    CHECK(r1.h == doctest::Approx(r2.h));
    CHECK(r1.adjusted_p[0][2] == doctest::Approx(r2.adjusted_p[1][0]));
    CHECK(r1.mean_ranks[0] == doctest::Approx(r2.mean_ranks[1]));
}

TEST_CASE("posthoc on identical groups reports no differences") {
    auto res = posthoc_bonferroni({group("a", {1, 2, 3}), group("b", {1, 2, 3})});
    CHECK(res.relation[0][1] == Dominance::NoDifference);
}

TEST_CASE("dunn z and bonferroni-adjusted p match the reference computation") {
    std::vector<double> a{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> b{3.5, 4.5, 5.5, 6.5, 7.5, 8.5, 9.5, 10.5, 11.5, 12.5};
    std::vector<double> c{10, 11, 12, 13, 14, 15, 16, 17, 18, 19};
    auto res = posthoc_bonferroni({group("a", a), group("b", b), group("c", c)});
    CHECK(res.mean_ranks[0] == doctest::Approx(8.35));
    CHECK(res.mean_ranks[1] == doctest::Approx(13.3));
    CHECK(res.mean_ranks[2] == doctest::Approx(24.85));
    CHECK(res.adjusted_p[0][1] == doctest::Approx(0.625781824).epsilon(1e-6));
    CHECK(res.adjusted_p[0][2] == doctest::Approx(0.000083146).epsilon(1e-4));
    CHECK(res.adjusted_p[1][2] == doctest::Approx(0.010037778).epsilon(1e-6));
    CHECK(res.relation[0][2] == Dominance::Outperforms);
    CHECK(res.relation[2][0] == Dominance::DominatedBy);
    CHECK(res.relation[0][1] == Dominance::NoDifference);
}

TEST_CASE("four groups yield six pairs, each multiplied by six") {
    Xoshiro rng(19);
    std::vector<SampleGroup> groups;
    for (int g = 0; g < 4; ++g) {
        SampleGroup sg{"g", {}};
        for (int i = 0; i < 10; ++i) sg.values.push_back(rng.uniform(0, 1) + 0.8 * g);
        groups.push_back(sg);
    }
    auto res = posthoc_bonferroni(groups);
    int pairs = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            ++pairs;
            CHECK(res.adjusted_p[i][j] == res.adjusted_p[j][i]);
            CHECK(res.adjusted_p[i][j] <= 1.0);
        }
    CHECK(pairs == 6);
}

TEST_CASE("dominance matrix is antisymmetric on random data") {
    Xoshiro rng(23);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<SampleGroup> groups;
        for (int g = 0; g < 4; ++g) {
            SampleGroup sg{"g", {}};
            for (int i = 0; i < 15; ++i) sg.values.push_back(rng.uniform(0, 1) + rng.uniform(0, 2) * g);
            groups.push_back(sg);
        }
        auto res = posthoc_bonferroni(groups);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                if (res.relation[i][j] == Dominance::Outperforms)
                    CHECK(res.relation[j][i] == Dominance::DominatedBy);
                if (res.relation[i][j] == Dominance::DominatedBy)
                    CHECK(res.relation[j][i] == Dominance::Outperforms);
            }
    }
}

TEST_CASE("pairwise verdicts are gated on the omnibus rejection") {
    // two clearly separated groups plus noise keep the omnibus significant;
    // with nearly identical groups nothing may be flagged
    auto close = posthoc_bonferroni(
        {group("a", {1.0, 1.1, 0.9, 1.05}), group("b", {1.02, 0.95, 1.08, 1.0}),
         group("c", {0.97, 1.03, 1.01, 0.99})});
    CHECK(close.p > 0.05);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(close.relation[i][j] == Dominance::NoDifference);
}

TEST_CASE("ks normality diagnostic behaves on degenerate and clean samples") {
    CHECK(ks_normality({1.0, 1.0, 1.0, 1.0, 1.0, 1.0}) == doctest::Approx(0.0));

    // normal samples: p above 0.05 in at least 90% of replicates
    Xoshiro rng(29);
    int ok = 0;
    const int reps = 60;
    for (int rep = 0; rep < reps; ++rep) {
        std::vector<double> v;
        for (int i = 0; i < 200; ++i) {
            // Box-Muller from the deterministic generator
            double u1 = rng.uniform();
            double u2 = rng.uniform();
            v.push_back(std::sqrt(-2.0 * std::log(u1 + 1e-300)) * std::cos(6.283185307179586 * u2));
        }
        if (ks_normality(v) > 0.05) ++ok;
    }
    CHECK(ok >= static_cast<int>(0.9 * reps));

    // uniform samples of 200: rejected in at least 90% of replicates
    int rejected = 0;
    for (int rep = 0; rep < reps; ++rep) {
        std::vector<double> v;
        for (int i = 0; i < 200; ++i) v.push_back(rng.uniform());
        if (ks_normality(v) < 0.05) ++rejected;
    }
    CHECK(rejected >= static_cast<int>(0.9 * reps));
}

TEST_CASE("kruskal-wallis null rejection rate is calibrated near alpha") {
    Xoshiro rng(31);
    int rejections = 0;
    const int reps = 400;
    for (int rep = 0; rep < reps; ++rep) {
        std::vector<SampleGroup> groups;
        for (int g = 0; g < 3; ++g) {
            SampleGroup sg{"g", {}};
            for (int i = 0; i < 30; ++i) sg.values.push_back(rng.uniform());
            groups.push_back(sg);
        }
        if (kruskal_wallis(groups).p < 0.05) ++rejections;
    }
    double rate = static_cast<double>(rejections) / reps;
    CHECK(rate > 0.02);
    CHECK(rate < 0.09);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(kruskal_wallis({group("a", {1.0, 2.0})}), std::invalid_argument);
    CHECK_THROWS_AS(kruskal_wallis({group("a", {1.0}), group("b", {1.0, 2.0})}),
                    std::invalid_argument);
    CHECK_THROWS_AS(ks_normality({1.0, 2.0}), std::invalid_argument);
}
