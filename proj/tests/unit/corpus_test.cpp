#include <gtest/gtest.h>

#include <functional>
#include <set>
#include <sstream>

#include "ldscore/corpus.hpp"
#include "ldscore/error.hpp"

using namespace ldscore;
using namespace ldscore::corpus;

namespace {

std::string line(const std::string& id, const std::string& source, const std::string& extra = R"(,"variant":"original")") {
    return R"({"id":")" + id + R"(","text":"some text","domain":"essay","source":")" + source + "\"" + extra + "}\n";
}

std::vector<TextSample> parse(const std::string& s) {
    std::istringstream in(s);
    return parse_corpus(in);
}

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

std::vector<TextSample> pool(std::size_t humans, std::size_t ais) {
    std::vector<TextSample> out;
    for (std::size_t i = 0; i < humans; ++i) out.push_back({"h" + std::to_string(i), "t", "d", "human", {}, Variant::original, ""});
    for (std::size_t i = 0; i < ais; ++i) out.push_back({"a" + std::to_string(i), "t", "d", "gpt", 0.7, Variant::original, ""});
    return out;
}

}  // namespace

TEST(Corpus, ParsesLinesInFileOrder) {
    const auto s = parse(line("q1", "human") + line("q2", "gpt", R"(,"temperature":0.7,"variant":"original")") +
                         line("q3", "gpt", R"(,"variant":"avoid_one","avoided_letters":["e"])"));
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s[0].id, "q1");
    EXPECT_TRUE(s[0].is_human());
    EXPECT_DOUBLE_EQ(*s[1].temperature, 0.7);
    EXPECT_EQ(s[2].variant, Variant::avoid_one);
    EXPECT_EQ(s[2].avoided_letters, "e");
}

TEST(Corpus, DuplicateIdCitesBothLines) {
    const auto msg = error_of([] {
        parse(line("a", "human") + line("q1-h0", "human") + line("b", "human") + line("c", "human") +
              line("q1-h0", "human"));
    });
    EXPECT_NE(msg.find("q1-h0"), std::string::npos);
    EXPECT_NE(msg.find("2,5"), std::string::npos);
}

TEST(Corpus, AvoidVariantNeedsLetters) {
    EXPECT_THROW(parse(line("a", "gpt", R"(,"variant":"avoid_one","avoided_letters":[])")), ValidationError);
    EXPECT_THROW(parse(line("a", "gpt", R"(,"variant":"avoid_two","avoided_letters":["e"])")), ValidationError);
}

TEST(Corpus, MalformedLineNamesLineAndField) {
    const auto msg = error_of([] { parse(line("a", "human") + R"({"id":"b","text":5,"domain":"d","source":"s","variant":"original"})"); });
    EXPECT_NE(msg.find("line 2"), std::string::npos);
    EXPECT_NE(msg.find("text"), std::string::npos);
    EXPECT_THROW(parse("{not json\n"), ValidationError);
    EXPECT_THROW(parse(line("a", "human", R"(,"variant":"original","colour":"red")")), ValidationError);
}

TEST(Corpus, JsonRoundTrip) {
    const auto s = parse(line("q1", "human") + line("q2", "gpt", R"(,"temperature":0.5,"variant":"avoid_two","avoided_letters":["z","e"])"));
    std::ostringstream out;
    write_corpus(out, s);
    const auto again = parse(out.str());
    ASSERT_EQ(again.size(), 2u);
    EXPECT_EQ(again[1].avoided_letters, "ez");
    EXPECT_EQ(to_json_line(again[1]), to_json_line(s[1]));
}

TEST(Scores, ParsesRow) {
    std::istringstream in("sample_id,detector,score\ns1,dna,0.42\n");
    const auto r = parse_scores(in);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].sample_id, "s1");
    EXPECT_EQ(r[0].detector, "dna");
    EXPECT_DOUBLE_EQ(r[0].score, 0.42);
}

TEST(Scores, RejectsNonFiniteAndDuplicates) {
    std::istringstream nan_in("sample_id,detector,score\ns1,dna,NaN\n");
    const auto msg = error_of([&] { parse_scores(nan_in); });
    EXPECT_NE(msg.find("line 2"), std::string::npos);
    std::istringstream junk("sample_id,detector,score\ns1,dna,abc\n");
    EXPECT_THROW(parse_scores(junk), ValidationError);
    std::istringstream dup("sample_id,detector,score\ns1,dna,1\ns1,dna,2\n");
    EXPECT_THROW(parse_scores(dup), ValidationError);
}

TEST(Filter, AndAcrossKeysOrWithinKey) {
    const auto f = SampleFilter::parse({"source=gpt", "source=human", "class=ai"});
    auto s = pool(1, 1);
    EXPECT_FALSE(f.matches(s[0]));
    EXPECT_TRUE(f.matches(s[1]));
    EXPECT_EQ(f.describe("source"), "all");
    EXPECT_EQ(SampleFilter::parse({"domain=essay"}).describe("domain"), "essay");
    EXPECT_THROW(SampleFilter::parse({"colour=red"}), ValidationError);
    EXPECT_THROW(SampleFilter::parse({"nokey"}), ValidationError);
}

TEST(Split, DeterministicForSeed) {
    const auto samples = pool(500, 500);
    SplitSpec spec;
    spec.seed = 7;
    spec.n_train_human = 50;
    spec.n_train_ai = 50;
    const auto a = split(samples, ScoreTable{}, spec);
    const auto b = split(samples, ScoreTable{}, spec);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.train.size(), 100u);
    EXPECT_EQ(a.eval.size(), 900u);
    spec.seed = 8;
    EXPECT_NE(split(samples, ScoreTable{}, spec).train, a.train);
}

TEST(Split, InsufficientPopulationReportsCounts) {
    SplitSpec spec;
    spec.n_train_human = 50;
    spec.n_train_ai = 10;
    const auto msg = error_of([&] { split(pool(30, 100), ScoreTable{}, spec); });
    EXPECT_NE(msg.find("30 < 50"), std::string::npos);
}

TEST(Split, UnbalancedRatio) {
    const auto samples = pool(200, 800);
    SplitSpec spec;
    spec.seed = 3;
    spec.n_train_human = 10;
    spec.n_train_ai = 90;
    const auto s = split(samples, ScoreTable{}, spec);
    ASSERT_EQ(s.train.size(), 100u);
    std::size_t humans = 0;
    for (auto i : s.train) humans += samples[i].is_human() ? 1 : 0;
    EXPECT_EQ(humans, 10u);
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    all.insert(s.eval.begin(), s.eval.end());
    EXPECT_EQ(all.size(), samples.size());
}

TEST(Split, RequiresScoreCoverage) {
    const auto samples = pool(5, 5);
    SplitSpec spec;
    spec.n_train_human = 1;
    spec.n_train_ai = 1;
    spec.detectors = {"dna"};
    EXPECT_THROW(split(samples, ScoreTable{}, spec), ValidationError);
}
