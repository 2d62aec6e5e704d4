#pragma once
// Readability, lexical diversity, n-gram vocabulary counts and surface
// stylometric features.
//
// Words are the chardist tokens (folded maximal a-z runs). Sentences are
// segments delimited by a run of '.', '!' or '?' followed by whitespace or
// end of text; only segments holding at least one character that is neither
// whitespace nor ASCII punctuation count, so a nonempty text without a
// terminator is one sentence. Syllables are maximal runs of a,e,i,o,u,y per
// word, minus one for a lone terminal 'e' (final vowel run is just that 'e')
// when the word has two or more runs, with a floor of one.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ldscore::stylometry {

struct StylometricProfile {
    double fkgl = 0.0;
    double lds = 0.0;
    std::uint64_t words = 0;
    std::uint64_t sentences = 0;
    std::uint64_t syllables = 0;
    std::uint64_t commas = 0;
    std::uint64_t dots = 0;
    std::uint64_t punctuation_total = 0;
    std::uint64_t numerals = 0;
    double words_per_sentence = 0.0;
    double ttr_lemmas_proxy = 0.0;
};

// CSV column order for profiles (after the sample id).
inline constexpr std::string_view kProfileColumns =
    "words,sentences,syllables,fkgl,lds,commas,dots,punctuation_total,numerals,words_per_sentence,ttr_lemmas_proxy";

struct NgramReport {
    unsigned n = 1;
    std::uint64_t unique_count = 0;
    std::uint64_t total_count = 0;
};

std::uint64_t syllable_count(std::string_view folded_word);
std::uint64_t sentence_count(std::string_view text);

double fkgl_from_counts(std::uint64_t words, std::uint64_t sentences, std::uint64_t syllables);
double fkgl(std::string_view text);
double lexical_diversity(std::string_view text);

// n-grams never span two samples.
NgramReport ngram_report(std::span<const std::string> texts, unsigned n);

// Never throws. With zero words, fkgl, lds, words_per_sentence and
// ttr_lemmas_proxy are 0; with zero sentences, words_per_sentence is 0.
StylometricProfile surface_features(std::string_view text);

struct FeatureColumn {
    std::string name;
    std::vector<double> values;
};

struct FeatureF1 {
    std::string name;
    double f1 = 0.0;
    double threshold = 0.0;
    bool higher_is_positive = true;
};

// Per feature: stratified split (train_fraction of each class, shuffled by
// stream(seed, 0) for label -1 and stream(seed, 1) for +1), then the
// threshold and polarity maximizing training F1; reports evaluation F1.
// Labels are +1 (positive) / -1.
std::vector<FeatureF1> feature_classifier_eval(std::span<const FeatureColumn> features, std::span<const int> labels,
                                               std::uint64_t seed, double train_fraction = 0.5);

}  // namespace ldscore::stylometry
