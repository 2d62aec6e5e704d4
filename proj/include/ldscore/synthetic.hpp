#pragma once
// Synthetic corpora for checking the separation structure without the
// benchmark data: a Zipf-weighted vocabulary stands in for the global word
// distribution, AI sources sample it directly and the human source samples
// a domain-skewed variant of it.

#include <cstdint>
#include <string>
#include <vector>

#include "ldscore/analysis.hpp"
#include "ldscore/corpus.hpp"
#include "ldscore/rng.hpp"

namespace ldscore::synthetic {

using chardist::WordDistribution;

// O(1) categorical draws (Vose alias method) over a word distribution.
class WordSampler {
public:
    explicit WordSampler(const WordDistribution& distribution);

    std::size_t draw_index(SplitMix64& rng) const;
    const std::string& draw(SplitMix64& rng) const { return words_[draw_index(rng)]; }

    const std::vector<std::string>& words() const { return words_; }
    const std::vector<double>& probabilities() const { return probabilities_; }

private:
    std::vector<std::string> words_;
    std::vector<double> probabilities_;
    std::vector<double> accept_;
    std::vector<std::size_t> alias_;
};

struct VocabularyOptions {
    std::size_t size = 5000;
    double zipf_exponent = 1.0;
    std::size_t min_length = 2;
    std::size_t max_length = 9;
};

// Distinct random words with English-like letter frequencies; the word at
// rank r (1-based) gets probability proportional to r^-zipf_exponent.
WordDistribution synthetic_vocabulary(const VocabularyOptions& options, std::uint64_t seed);

// n words joined by single spaces.
std::string sample_text(const WordSampler& sampler, std::size_t n_words, SplitMix64& rng);

struct WallOptions {
    std::size_t ai_sources = 4;
    std::size_t samples_per_source = 20;
    std::size_t words_per_sample = 250;
    analysis::DomainSkew skew{"bcdfgmpw", 4.0};
    VocabularyOptions vocabulary;
    std::string domain = "synthetic";
};

// Sources "model-1".."model-N" and "human". Streams: vocabulary uses
// stream(seed, 0); source k (human last) uses stream(seed, k + 1).
std::vector<corpus::TextSample> wall_corpus(const WallOptions& options, std::uint64_t seed);

}  // namespace ldscore::synthetic
