#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "../support/oracles.hpp"
#include "ldscore/analysis.hpp"
#include "ldscore/error.hpp"
#include "ldscore/synthetic.hpp"

using namespace ldscore;
using namespace ldscore::analysis;

namespace {

LetterDistribution from_vec(const std::vector<double>& v) {
    LetterDistribution d;
    std::copy(v.begin(), v.end(), d.p.begin());
    d.total_letters = 1;
    return d;
}

DivergenceMatrix labelled(std::vector<std::string> labels, std::vector<std::vector<double>> m) {
    return DivergenceMatrix{std::move(labels), std::move(m)};
}

void collect_merges(const DendrogramNode& n, std::vector<oracle::Merge>& out) {
    if (n.is_leaf()) return;
    ASSERT_EQ(n.children.size(), 2u);
    collect_merges(n.children[0], out);
    collect_merges(n.children[1], out);
    auto l = n.children[0].leaves(), r = n.children[1].leaves();
    std::sort(l.begin(), l.end());
    std::sort(r.begin(), r.end());
    out.push_back({l, r, n.height});
}

void check_monotone(const DendrogramNode& n) {
    for (const auto& c : n.children) {
        if (!c.is_leaf()) EXPECT_LE(c.height, n.height);
        check_monotone(c);
    }
}

}  // namespace

TEST(PairwiseMatrix, IdenticalGroupsGiveZeros) {
    const auto d = chardist::letter_distribution("hello world");
    const auto m = pairwise_matrix({{"x", d}, {"y", d}});
    EXPECT_EQ(m.m, (std::vector<std::vector<double>>{{0, 0}, {0, 0}}));
}

TEST(PairwiseMatrix, MatchesOracleOnRawCounts) {
    SplitMix64 rng(4);
    std::map<std::string, LetterDistribution> groups;
    std::map<std::string, std::vector<double>> counts;
    for (const char* name : {"g1", "g2", "g3"}) {
        std::vector<std::string> texts;
        for (int i = 0; i < 5; ++i) texts.push_back(oracle::random_word(rng, 30 + rng.below(30)));
        std::string all;
        for (const auto& t : texts) all += t;
        const auto c = oracle::ascii_counts(all);
        counts[name] = {c.begin(), c.end()};
        groups[name] = chardist::pooled_distribution(texts);
    }
    const auto m = pairwise_matrix(groups);
    ASSERT_EQ(m.labels, (std::vector<std::string>{"g1", "g2", "g3"}));
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(m.m[i][i], 0.0);
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_EQ(m.m[i][j], m.m[j][i]);
            if (i != j)
                EXPECT_NEAR(m.m[i][j], oracle::root_jsd_from_counts(counts[m.labels[i]], counts[m.labels[j]]), 1e-12);
        }
    }
}

TEST(Separation, ReportedValuesHold) {
    const auto m = labelled({"gpt", "human", "llama", "mistral"},
                            {{0, 0.0250, 0.0217, 0.0100},
                             {0.0250, 0, 0.0300, 0.0406},
                             {0.0217, 0.0300, 0, 0.0054},
                             {0.0100, 0.0406, 0.0054, 0}});
    const auto r = separation_report(m, {"human"});
    EXPECT_TRUE(r.holds);
    EXPECT_DOUBLE_EQ(r.max_ai_ai, 0.0217);
    EXPECT_DOUBLE_EQ(r.min_human_ai, 0.0250);
    EXPECT_EQ(r.argmax_pair, std::make_pair(std::string("gpt"), std::string("llama")));
    EXPECT_EQ(r.argmin_pair, std::make_pair(std::string("gpt"), std::string("human")));
}

TEST(Separation, CloneOfAiGroupBreaksIt) {
    const auto a = chardist::letter_distribution("the quick brown fox");
    const auto b = chardist::letter_distribution("jumps over the lazy dog");
    const auto c = chardist::letter_distribution("pack my box with five dozen jugs");
    const auto m = pairwise_matrix({{"a", a}, {"b", b}, {"c", c}, {"human", a}});
    EXPECT_FALSE(separation_report(m, {"human"}).holds);
}

TEST(Separation, InvariantUnderPermutationAndRelabel) {
    SplitMix64 rng(8);
    for (int t = 0; t < 50; ++t) {
        std::map<std::string, LetterDistribution> g;
        for (const char* name : {"a", "b", "c", "d", "h"}) g[name] = from_vec(oracle::random_distribution(rng));
        const auto base = separation_report(pairwise_matrix(g), {"h"});
        std::map<std::string, LetterDistribution> renamed{
            {"z1", g["d"]}, {"z2", g["h"]}, {"z3", g["a"]}, {"z4", g["c"]}, {"z5", g["b"]}};
        const auto again = separation_report(pairwise_matrix(renamed), {"z2"});
        ASSERT_EQ(base.holds, again.holds);
        ASSERT_EQ(base.max_ai_ai, again.max_ai_ai);
        ASSERT_EQ(base.min_human_ai, again.min_human_ai);
    }
}

TEST(Separation, SyntheticWallHolds) {
    synthetic::WallOptions opts;
    opts.samples_per_source = 10;
    opts.words_per_sample = 2000;
    const auto corpus = synthetic::wall_corpus(opts, 123);
    std::map<std::string, std::vector<std::string>> texts;
    for (const auto& s : corpus) texts[s.source].push_back(s.text);
    std::map<std::string, LetterDistribution> groups;
    for (const auto& [k, v] : texts) groups[k] = chardist::pooled_distribution(v);
    EXPECT_EQ(groups.size(), 5u);
    EXPECT_TRUE(separation_report(pairwise_matrix(groups), {"human"}).holds);
}

TEST(Dendrogram, TwoLabels) {
    const auto root = agglomerative_cluster(labelled({"x", "y"}, {{0, 0.3}, {0.3, 0}}));
    EXPECT_DOUBLE_EQ(root.height, 0.3);
    ASSERT_EQ(root.children.size(), 2u);
    EXPECT_EQ(root.children[0].label, "x");
    EXPECT_EQ(root.children[1].label, "y");
}

TEST(Dendrogram, AverageLinkageThreeLabels) {
    const auto root = agglomerative_cluster(labelled({"A", "B", "C"}, {{0, 0.1, 0.5}, {0.1, 0, 0.5}, {0.5, 0.5, 0}}));
    EXPECT_DOUBLE_EQ(root.height, 0.5);
    EXPECT_DOUBLE_EQ(root.children[0].height, 0.1);
    EXPECT_EQ(root.children[0].leaves(), (std::vector<std::string>{"A", "B"}));
    EXPECT_EQ(root.children[1].label, "C");
}

TEST(Dendrogram, TiesBreakOnSmallestLabelPair) {
    const auto root = agglomerative_cluster(
        labelled({"d", "c", "b", "a"}, {{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}}));
    // a+b first, then (a,b)+c, then +d.
    EXPECT_EQ(root.children[1].label, "d");
    EXPECT_EQ(root.children[0].children[1].label, "c");
    EXPECT_EQ(root.children[0].children[0].leaves(), (std::vector<std::string>{"a", "b"}));
}

TEST(Dendrogram, MatchesNaiveAverageLinkage) {
    SplitMix64 rng(31);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 5 + t % 4;
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i)) + "g");
        rng.shuffle(labels);
        std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) d[i][j] = d[j][i] = rng.uniform();
        const auto root = agglomerative_cluster(labelled(labels, d));
        check_monotone(root);
        std::vector<oracle::Merge> got;
        collect_merges(root, got);
        const auto want = oracle::upgma(labels, d);
        ASSERT_EQ(got.size(), want.size());
        std::stable_sort(got.begin(), got.end(), [](const auto& x, const auto& y) { return x.height < y.height; });
        for (std::size_t k = 0; k < got.size(); ++k) {
            ASSERT_EQ(got[k].left, want[k].left);
            ASSERT_EQ(got[k].right, want[k].right);
            ASSERT_NEAR(got[k].height, want[k].height, 1e-12);
        }
    }
}

TEST(Pca, CollinearPointsHaveOneComponent) {
    std::vector<double> base(26, 1.0 / 26), dir(26, 0.0);
    dir[0] = 0.01;
    dir[1] = -0.01;
    std::vector<LetterDistribution> pts;
    for (double t : {-1.0, 0.3, 1.0, 2.0}) {
        auto v = base;
        for (std::size_t i = 0; i < 26; ++i) v[i] += t * dir[i];
        pts.push_back(from_vec(v));
    }
    const auto r = pca(pts, 1);
    EXPECT_NEAR(r.explained_variance_ratio[0], 1.0, 1e-9);
}

TEST(Pca, TwoPointsAreSymmetric) {
    const std::vector<LetterDistribution> pts{chardist::letter_distribution("abcabc"),
                                              chardist::letter_distribution("xyzzy")};
    const auto r = pca(pts, 1);
    EXPECT_NEAR(r.coordinates[0][0], -r.coordinates[1][0], 1e-12);
    EXPECT_GT(std::abs(r.coordinates[0][0]), 0.0);
    EXPECT_THROW(pca(pts, 2), ValidationError);
}

TEST(Pca, RandomInputMatchesJacobiOracleAndReconstructs) {
    SplitMix64 rng(61);
    for (int t = 0; t < 20; ++t) {
        std::vector<LetterDistribution> pts;
        for (int i = 0; i < 6; ++i) pts.push_back(from_vec(oracle::random_distribution(rng)));
        const auto r = pca(pts, 5);
        EXPECT_NEAR(std::accumulate(r.all_variance_ratios.begin(), r.all_variance_ratios.end(), 0.0), 1.0, 1e-9);

        const auto back = reconstruct(r);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t k = 0; k < 26; ++k) ASSERT_NEAR(back[i][k], pts[i].p[k], 1e-9);

        std::vector<double> mean(26, 0.0);
        for (const auto& p : pts)
            for (std::size_t k = 0; k < 26; ++k) mean[k] += p.p[k] / 6.0;
        std::vector<std::vector<double>> cov(26, std::vector<double>(26, 0.0));
        for (const auto& p : pts)
            for (std::size_t a = 0; a < 26; ++a)
                for (std::size_t b = 0; b < 26; ++b) cov[a][b] += (p.p[a] - mean[a]) * (p.p[b] - mean[b]) / 5.0;
        auto eig = oracle::jacobi(cov);
        double total = 0;
        for (double v : eig.values) total += std::max(v, 0.0);
        for (std::size_t c = 0; c < 2; ++c) {
            EXPECT_NEAR(r.explained_variance_ratio[c], eig.values[c] / total, 1e-9);
            auto& v = eig.vectors[c];
            std::size_t arg = 0;
            for (std::size_t k = 1; k < 26; ++k)
                if (std::abs(v[k]) > std::abs(v[arg]) + 1e-12) arg = k;
            if (v[arg] < 0)
                for (auto& x : v) x = -x;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                double proj = 0;
                for (std::size_t k = 0; k < 26; ++k) proj += (pts[i].p[k] - mean[k]) * v[k];
                ASSERT_NEAR(r.coordinates[i][c], proj, 1e-9);
            }
        }
    }
}

TEST(Pearson, Examples) {
    const std::vector<double> xs{1, 2, 3, 4};
    EXPECT_NEAR(pearson(xs, std::vector<double>{3, 5, 7, 9}), 1.0, 1e-15);
    EXPECT_NEAR(pearson(xs, std::vector<double>{-1, -2, -3, -4}), -1.0, 1e-15);
    EXPECT_NEAR(pearson(xs, std::vector<double>{2, 1, 4, 3}), 0.6, 1e-15);
    EXPECT_THROW(pearson(xs, std::vector<double>{2, 2, 2, 2}), NumericError);
}

TEST(Pearson, AffineInvariance) {
    SplitMix64 rng(3);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> x(20), y(20), ax(20), ny(20);
        for (int i = 0; i < 20; ++i) {
            x[i] = rng.normal();
            y[i] = x[i] + rng.normal();
            ax[i] = 3.5 * x[i] + 2.0;
            ny[i] = -y[i];
        }
        const double r = pearson(x, y);
        ASSERT_NEAR(pearson(ax, y), r, 1e-12);
        ASSERT_NEAR(pearson(x, ny), -r, 1e-12);
    }
}

TEST(CorrelationMatrix, DuplicateSignalAndIndependence) {
    SplitMix64 rng(10);
    const std::size_t n = 10000;
    Signal a{"a", {}, {}}, b{"b", {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
        a.ids.push_back(std::to_string(i));
        a.values.push_back(rng.normal());
        b.values.push_back(rng.normal());
    }
    b.ids = a.ids;
    Signal copy = a;
    copy.name = "a2";
    const std::vector<Signal> signals{a, copy, b};
    const auto m = correlation_matrix(signals);
    EXPECT_NEAR(m.m[0][1], 1.0, 1e-12);
    EXPECT_LT(std::abs(m.m[0][2]), 0.05);
    Signal shifted = b;
    shifted.ids[0] = "other";
    const std::vector<Signal> bad{a, shifted};
    EXPECT_THROW(correlation_matrix(bad), ValidationError);
}

TEST(Convergence, SlopeIsMinusHalfWithoutSkew) {
    const auto ref = synthetic::synthetic_vocabulary({}, 1);
    const std::vector<std::uint64_t> sizes{100, 1000, 10000, 100000, 1000000};
    const auto curve = convergence_simulation(ref, sizes, std::nullopt, 42, 2);
    EXPECT_NEAR(curve.fitted_slope, -0.5, 0.1);
    const auto again = convergence_simulation(ref, sizes, std::nullopt, 42, 2);
    EXPECT_EQ(curve.errors, again.errors);
}

TEST(Convergence, SkewLeavesAFloor) {
    const auto ref = synthetic::synthetic_vocabulary({}, 1);
    const std::vector<std::uint64_t> sizes{100000, 1000000};
    const auto curve = convergence_simulation(ref, sizes, DomainSkew{"bcdfgmpw", 4.0}, 42, 2);
    const double decade_slope = std::log10(curve.errors[1] / curve.errors[0]);
    EXPECT_GT(decade_slope, -0.1);
}

TEST(Convergence, ExactExpectationHasZeroError) {
    const auto ref = synthetic::synthetic_vocabulary({}, 2);
    const auto p = chardist::project_word_to_letter(ref);
    EXPECT_EQ(chardist::ld_score(p, p).value, 0.0);
}

TEST(LeastSquares, ExactLine) {
    const auto [slope, intercept, rms] =
        least_squares_line(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 5});
    EXPECT_NEAR(slope, 2.0, 1e-12);
    EXPECT_NEAR(intercept, -1.0, 1e-12);
    EXPECT_NEAR(rms, 0.0, 1e-12);
}
