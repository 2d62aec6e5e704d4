#include "ldscore/synthetic.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <set>

#include "ldscore/error.hpp"

namespace ldscore::synthetic {

namespace {

// Approximate English letter frequencies (percent), a..z.
constexpr std::array<double, 26> kEnglishLetterWeights{
    8.2, 1.5, 2.8, 4.3, 12.7, 2.2, 2.0, 6.1, 7.0, 0.15, 0.77, 4.0, 2.4,
    6.7, 7.5, 1.9, 0.095, 6.0, 6.3, 9.1, 2.8, 0.98, 2.4, 0.15, 2.0, 0.074};

}  // namespace

WordSampler::WordSampler(const WordDistribution& distribution) {
    if (distribution.p.empty()) throw ValidationError("word sampler: empty distribution");
    double total = 0.0;
    for (const auto& [word, prob] : distribution.p) {
        if (!(prob >= 0.0)) throw ValidationError("word sampler: negative probability for '" + word + "'");
        words_.push_back(word);
        probabilities_.push_back(prob);
        total += prob;
    }
    if (!(total > 0.0)) throw ValidationError("word sampler: zero total mass");
    for (auto& p : probabilities_) p /= total;

    const std::size_t n = words_.size();
    accept_.assign(n, 1.0);
    alias_.resize(n);
    std::vector<double> scaled(n);
    std::vector<std::size_t> small;
    std::vector<std::size_t> large;
    for (std::size_t i = 0; i < n; ++i) {
        alias_[i] = i;
        scaled[i] = probabilities_[i] * static_cast<double>(n);
        (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
        const std::size_t s = small.back();
        small.pop_back();
        const std::size_t l = large.back();
        large.pop_back();
        accept_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    // Leftovers are numerically 1.
    for (auto i : small) accept_[i] = 1.0;
    for (auto i : large) accept_[i] = 1.0;
}

std::size_t WordSampler::draw_index(SplitMix64& rng) const {
    const auto i = static_cast<std::size_t>(rng.below(words_.size()));
    return rng.uniform() < accept_[i] ? i : alias_[i];
}

WordDistribution synthetic_vocabulary(const VocabularyOptions& options, std::uint64_t seed) {
    if (options.size == 0 || options.min_length == 0 || options.min_length > options.max_length)
        throw ValidationError("synthetic vocabulary: invalid options");

    std::vector<double> cumulative;
    double acc = 0.0;
    for (double w : kEnglishLetterWeights) cumulative.push_back(acc += w);

    auto rng = SplitMix64(seed);
    const auto draw_letter = [&]() {
        const double u = rng.uniform() * acc;
        std::size_t i = 0;
        while (i + 1 < cumulative.size() && u >= cumulative[i]) ++i;
        return static_cast<char>('a' + i);
    };

    std::set<std::string> seen;
    std::vector<std::string> ordered;
    const std::size_t span = options.max_length - options.min_length + 1;
    std::size_t attempts = 0;
    while (ordered.size() < options.size) {
        if (++attempts > options.size * 1000)
            throw ValidationError("synthetic vocabulary: cannot draw enough distinct words");
        const std::size_t length = options.min_length + static_cast<std::size_t>(rng.below(span));
        std::string word;
        for (std::size_t k = 0; k < length; ++k) word.push_back(draw_letter());
        if (seen.insert(word).second) ordered.push_back(std::move(word));
    }

    WordDistribution out;
    double total = 0.0;
    std::vector<double> weights;
    for (std::size_t r = 0; r < ordered.size(); ++r) {
        weights.push_back(std::pow(static_cast<double>(r + 1), -options.zipf_exponent));
        total += weights.back();
    }
    for (std::size_t r = 0; r < ordered.size(); ++r) out.p.emplace(ordered[r], weights[r] / total);
    out.total_words = ordered.size();
    return out;
}

std::string sample_text(const WordSampler& sampler, std::size_t n_words, SplitMix64& rng) {
    std::string out;
    for (std::size_t i = 0; i < n_words; ++i) {
        if (i) out.push_back(' ');
        out += sampler.draw(rng);
    }
    return out;
}

std::vector<corpus::TextSample> wall_corpus(const WallOptions& options, std::uint64_t seed) {
    if (options.ai_sources < 2) throw ValidationError("wall corpus: need at least two AI sources");
    if (options.samples_per_source == 0 || options.words_per_sample == 0)
        throw ValidationError("wall corpus: empty sources");

    const auto global = synthetic_vocabulary(options.vocabulary, SplitMix64::stream(seed, 0).next());
    const WordSampler ai_sampler(global);
    const WordSampler human_sampler(analysis::apply_skew(global, options.skew));

    std::vector<corpus::TextSample> out;
    for (std::size_t k = 0; k <= options.ai_sources; ++k) {
        const bool human = k == options.ai_sources;
        const std::string source = human ? std::string(corpus::kHumanSource) : "model-" + std::to_string(k + 1);
        auto rng = SplitMix64::stream(seed, k + 1);
        for (std::size_t i = 0; i < options.samples_per_source; ++i) {
            char id[64];
            std::snprintf(id, sizeof id, "%s-%04zu", source.c_str(), i);
            corpus::TextSample s;
            s.id = id;
            s.text = sample_text(human ? human_sampler : ai_sampler, options.words_per_sample, rng);
            s.domain = options.domain;
            s.source = source;
            out.push_back(std::move(s));
        }
    }
    return out;
}

}  // namespace ldscore::synthetic
