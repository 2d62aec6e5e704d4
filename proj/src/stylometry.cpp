#include "ldscore/stylometry.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "ldscore/error.hpp"
#include "ldscore/fusion.hpp"
#include "ldscore/rng.hpp"
#include "ldscore/text.hpp"

namespace ldscore::stylometry {

namespace {

bool is_vowel(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_punct(char c) {
    const auto u = static_cast<unsigned char>(c);
    return (u >= 33 && u <= 47) || (u >= 58 && u <= 64) || (u >= 91 && u <= 96) || (u >= 123 && u <= 126);
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace

std::uint64_t syllable_count(std::string_view folded_word) {
    std::uint64_t groups = 0;
    std::size_t last_group_start = 0;
    bool in_group = false;
    for (std::size_t i = 0; i < folded_word.size(); ++i) {
        const bool v = is_vowel(folded_word[i]);
        if (v && !in_group) {
            ++groups;
            last_group_start = i;
        }
        in_group = v;
    }
    const bool lone_final_e = !folded_word.empty() && folded_word.back() == 'e' &&
                              last_group_start == folded_word.size() - 1;
    if (groups >= 2 && lone_final_e) --groups;
    return std::max<std::uint64_t>(groups, 1);
}

std::uint64_t sentence_count(std::string_view text) {
    std::uint64_t count = 0;
    bool content = false;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (is_terminator(c)) {
            std::size_t j = i;
            while (j < text.size() && is_terminator(text[j])) ++j;
            if ((j == text.size() || is_space(text[j])) && content) {
                ++count;
                content = false;
            }
            i = j;
            continue;
        }
        if (!is_space(c) && !is_ascii_punct(c)) content = true;
        ++i;
    }
    if (content) ++count;
    return count;
}

double fkgl_from_counts(std::uint64_t words, std::uint64_t sentences, std::uint64_t syllables) {
    if (words == 0) throw ValidationError("fkgl: degenerate input (no words)");
    if (sentences == 0) throw ValidationError("fkgl: degenerate input (no sentences)");
    const double w = static_cast<double>(words);
    return 0.39 * (w / static_cast<double>(sentences)) + 11.8 * (static_cast<double>(syllables) / w) - 15.59;
}

double fkgl(std::string_view text) {
    const auto tokens = text::tokenize(text);
    std::uint64_t syllables = 0;
    for (const auto& t : tokens) syllables += syllable_count(t);
    return fkgl_from_counts(tokens.size(), sentence_count(text), syllables);
}

double lexical_diversity(std::string_view text) {
    const auto tokens = text::tokenize(text);
    if (tokens.empty()) throw ValidationError("lexical_diversity: degenerate input (no tokens)");
    const std::unordered_set<std::string> types(tokens.begin(), tokens.end());
    return static_cast<double>(types.size()) / static_cast<double>(tokens.size());
}

NgramReport ngram_report(std::span<const std::string> texts, unsigned n) {
    if (n != 1 && n != 2) throw ValidationError("ngram_report: unsupported order " + std::to_string(n));
    NgramReport r;
    r.n = n;
    std::unordered_set<std::string> seen;
    std::uint64_t tokens_total = 0;
    for (const auto& t : texts) {
        const auto tokens = text::tokenize(t);
        tokens_total += tokens.size();
        if (tokens.size() < n) continue;
        for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
            std::string gram = tokens[i];
            if (n == 2) {
                gram.push_back(' ');
                gram += tokens[i + 1];
            }
            seen.insert(std::move(gram));
            ++r.total_count;
        }
    }
    if (tokens_total == 0) throw ValidationError("ngram_report: no tokens");
    r.unique_count = seen.size();
    return r;
}

StylometricProfile surface_features(std::string_view text) {
    StylometricProfile p;
    for (char c : text) {
        if (c == ',') ++p.commas;
        if (c == '.') ++p.dots;
        if (is_ascii_punct(c)) ++p.punctuation_total;
        if (c >= '0' && c <= '9') ++p.numerals;
    }
    const auto tokens = text::tokenize(text);
    p.words = tokens.size();
    p.sentences = sentence_count(text);
    for (const auto& t : tokens) p.syllables += syllable_count(t);
    if (p.words > 0) {
        const std::unordered_set<std::string> types(tokens.begin(), tokens.end());
        p.lds = static_cast<double>(types.size()) / static_cast<double>(p.words);
        p.ttr_lemmas_proxy = p.lds;
        if (p.sentences > 0) {
            p.fkgl = fkgl_from_counts(p.words, p.sentences, p.syllables);
            p.words_per_sentence = static_cast<double>(p.words) / static_cast<double>(p.sentences);
        }
    }
    return p;
}

std::vector<FeatureF1> feature_classifier_eval(std::span<const FeatureColumn> features, std::span<const int> labels,
                                               std::uint64_t seed, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ValidationError("feature_classifier_eval: train_fraction must lie in (0,1)");
    std::vector<std::size_t> neg;
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) pos.push_back(i);
        else if (labels[i] == -1) neg.push_back(i);
        else throw ValidationError("feature_classifier_eval: labels must be +1 or -1");
    }
    if (pos.size() < 2 || neg.size() < 2)
        throw ValidationError("feature_classifier_eval: need at least two samples per class");

    auto neg_rng = SplitMix64::stream(seed, 0);
    auto pos_rng = SplitMix64::stream(seed, 1);
    neg_rng.shuffle(neg);
    pos_rng.shuffle(pos);
    const auto take = [&](std::size_t size) {
        const auto k = static_cast<std::size_t>(static_cast<double>(size) * train_fraction);
        return std::clamp<std::size_t>(k, 1, size - 1);
    };
    std::vector<std::size_t> train(neg.begin(), neg.begin() + take(neg.size()));
    train.insert(train.end(), pos.begin(), pos.begin() + take(pos.size()));
    std::vector<std::size_t> eval(neg.begin() + take(neg.size()), neg.end());
    eval.insert(eval.end(), pos.begin() + take(pos.size()), pos.end());
    std::sort(train.begin(), train.end());
    std::sort(eval.begin(), eval.end());

    std::vector<int> train_labels;
    std::vector<int> eval_labels;
    for (auto i : train) train_labels.push_back(labels[i]);
    for (auto i : eval) eval_labels.push_back(labels[i]);

    std::vector<FeatureF1> out;
    for (const auto& feature : features) {
        if (feature.values.size() != labels.size())
            throw ValidationError("feature_classifier_eval: feature '" + feature.name + "' has wrong length");
        FeatureF1 best{feature.name, 0.0, 0.0, true};
        double best_train_f1 = -1.0;
        for (const bool higher : {true, false}) {
            const double sign = higher ? 1.0 : -1.0;
            std::vector<double> train_scores;
            std::vector<double> eval_scores;
            for (auto i : train) train_scores.push_back(sign * feature.values[i]);
            for (auto i : eval) eval_scores.push_back(sign * feature.values[i]);
            const double t = fusion::calibrate_threshold(train_scores, train_labels);
            const double train_f1 = fusion::f1_at(train_scores, train_labels, t);
            if (train_f1 > best_train_f1) {
                best_train_f1 = train_f1;
                best.threshold = sign * t;
                best.higher_is_positive = higher;
                best.f1 = fusion::f1_at(eval_scores, eval_labels, t);
            }
        }
        out.push_back(best);
    }
    return out;
}

}  // namespace ldscore::stylometry
