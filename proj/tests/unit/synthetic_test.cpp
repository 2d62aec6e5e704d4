#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "ldscore/synthetic.hpp"

using namespace ldscore;
using namespace ldscore::synthetic;

TEST(Vocabulary, NormalizedAndDeterministic) {
    const auto a = synthetic_vocabulary({}, 3);
    const auto b = synthetic_vocabulary({}, 3);
    EXPECT_EQ(a.p, b.p);
    EXPECT_EQ(a.p.size(), 5000u);
    double s = 0;
    for (const auto& [w, p] : a.p) {
        s += p;
        ASSERT_GE(w.size(), 2u);
        ASSERT_LE(w.size(), 9u);
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(WordSampler, FrequenciesFollowDistribution) {
    chardist::WordDistribution d{{{"aa", 0.5}, {"bb", 0.3}, {"cc", 0.2}}, 10};
    WordSampler sampler(d);
    SplitMix64 rng(1);
    std::map<std::string, int> hits;
    const int n = 200000;
    for (int i = 0; i < n; ++i) ++hits[sampler.draw(rng)];
    EXPECT_NEAR(hits["aa"] / double(n), 0.5, 0.005);
    EXPECT_NEAR(hits["bb"] / double(n), 0.3, 0.005);
    EXPECT_NEAR(hits["cc"] / double(n), 0.2, 0.005);
}

TEST(Skew, BoostsFocusLetterWords) {
    chardist::WordDistribution d{{{"bb", 0.5}, {"aa", 0.5}}, 2};
    const auto s = analysis::apply_skew(d, {"b", 1.0});
    EXPECT_DOUBLE_EQ(s.p.at("bb"), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.p.at("aa"), 1.0 / 3.0);
}

TEST(Wall, LayoutAndReproducibility) {
    WallOptions opts;
    opts.samples_per_source = 3;
    opts.words_per_sample = 20;
    const auto c = wall_corpus(opts, 5);
    ASSERT_EQ(c.size(), 15u);
    EXPECT_EQ(c.front().id, "model-1-0000");
    EXPECT_EQ(c.back().source, "human");
    for (const auto& s : c) EXPECT_EQ(text::tokenize(s.text).size(), 20u);
    const auto again = wall_corpus(opts, 5);
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i].text, again[i].text);
}
