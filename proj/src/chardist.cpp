#include "ldscore/chardist.hpp"

#include <algorithm>
#include <cmath>

#include "ldscore/error.hpp"

namespace ldscore::chardist {

namespace {

void require_mass(const LetterDistribution& d, std::string_view which) {
    double sum = 0.0;
    for (double v : d.p) sum += v;
    if (!(sum > 0.5)) throw ValidationError(std::string(which) + " letter distribution is degenerate (no letters)");
}

double jsd_unchecked(std::span<const double> p, std::span<const double> q) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = 0.5 * (p[i] + q[i]);
        const double a = p[i] > 0.0 ? p[i] * std::log2(p[i] / m) : 0.0;
        const double b = q[i] > 0.0 ? q[i] * std::log2(q[i] / m) : 0.0;
        acc += a + b;  // a + b == b + a, so swapping p and q is bit-exact
    }
    return std::clamp(0.5 * acc, 0.0, 1.0);
}

}  // namespace

LetterDistribution LetterDistribution::from_counts(const LetterCounts& counts) {
    LetterDistribution d;
    for (auto c : counts) d.total_letters += c;
    if (d.total_letters == 0) throw ValidationError("degenerate input: no letters a-z");
    const auto total = static_cast<double>(d.total_letters);
    for (std::size_t i = 0; i < kAlphabetSize; ++i) d.p[i] = static_cast<double>(counts[i]) / total;
    return d;
}

WordDistribution WordDistribution::from_counts(const std::map<std::string, std::uint64_t>& counts) {
    WordDistribution w;
    for (const auto& [_, c] : counts) w.total_words += c;
    if (w.total_words == 0) throw ValidationError("degenerate input: no word tokens");
    const auto total = static_cast<double>(w.total_words);
    for (const auto& [word, c] : counts) {
        if (c > 0) w.p.emplace(word, static_cast<double>(c) / total);
    }
    return w;
}

LetterDistribution letter_distribution(std::string_view text) {
    return LetterDistribution::from_counts(text::count_letters(text));
}

LetterDistribution pooled_distribution(std::span<const std::string> texts) {
    LetterCounts pooled{};
    for (const auto& t : texts) {
        const auto counts = text::count_letters(t);
        for (std::size_t i = 0; i < kAlphabetSize; ++i) pooled[i] += counts[i];
    }
    return LetterDistribution::from_counts(pooled);
}

LetterDistribution mean_distribution(std::span<const std::string> texts) {
    if (texts.empty()) throw ValidationError("degenerate input: empty group");
    LetterDistribution out;
    for (const auto& t : texts) {
        const auto d = letter_distribution(t);
        for (std::size_t i = 0; i < kAlphabetSize; ++i) out.p[i] += d.p[i];
        out.total_letters += d.total_letters;
    }
    for (auto& v : out.p) v /= static_cast<double>(texts.size());
    return out;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw ValidationError("kl_divergence: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) {
            throw NumericError("kl_divergence: support mismatch at index " + std::to_string(i) +
                               " (p > 0, q = 0)");
        }
        acc += p[i] * std::log2(p[i] / q[i]);
    }
    return std::max(acc, 0.0);
}

double jsd(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw ValidationError("jsd: dimension mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0) || !(q[i] >= 0.0)) throw ValidationError("jsd: negative or NaN probability");
    }
    return jsd_unchecked(p, q);
}

LdScore ld_score(const LetterDistribution& a, const LetterDistribution& b) {
    require_mass(a, "first");
    require_mass(b, "second");
    return LdScore{std::sqrt(jsd_unchecked(a.p, b.p))};
}

WordDistribution word_distribution(std::string_view text) {
    std::map<std::string, std::uint64_t> counts;
    for (auto& tok : text::tokenize(text)) ++counts[std::move(tok)];
    return WordDistribution::from_counts(counts);
}

WordDistribution pooled_word_distribution(std::span<const std::string> texts) {
    std::map<std::string, std::uint64_t> counts;
    for (const auto& t : texts) {
        for (auto& tok : text::tokenize(t)) ++counts[std::move(tok)];
    }
    return WordDistribution::from_counts(counts);
}

double wd_score(const WordDistribution& a, const WordDistribution& b) {
    if (a.p.empty() || b.p.empty()) throw ValidationError("wd_score: degenerate word distribution");
    // Merge walk over the two sorted vocabularies.
    double acc = 0.0;
    auto ia = a.p.begin();
    auto ib = b.p.begin();
    while (ia != a.p.end() || ib != b.p.end()) {
        double pa = 0.0;
        double pb = 0.0;
        if (ib == b.p.end() || (ia != a.p.end() && ia->first < ib->first)) {
            pa = (ia++)->second;
        } else if (ia == a.p.end() || ib->first < ia->first) {
            pb = (ib++)->second;
        } else {
            pa = (ia++)->second;
            pb = (ib++)->second;
        }
        const double m = 0.5 * (pa + pb);
        acc += (pa > 0.0 ? pa * std::log2(pa / m) : 0.0) + (pb > 0.0 ? pb * std::log2(pb / m) : 0.0);
    }
    return std::sqrt(std::clamp(0.5 * acc, 0.0, 1.0));
}

LetterDistribution project_word_to_letter(const WordDistribution& w) {
    if (w.p.empty()) throw ValidationError("project_word_to_letter: empty word distribution");
    LetterDistribution out;
    double mean_length = 0.0;
    for (const auto& [word, prob] : w.p) {
        const auto counts = text::count_letters(word);
        std::uint64_t length = 0;
        for (auto c : counts) length += c;
        if (length == 0) throw ValidationError("project_word_to_letter: word '" + word + "' has no letters");
        const double weight = prob / static_cast<double>(length);
        for (std::size_t i = 0; i < kAlphabetSize; ++i) {
            if (counts[i] != 0) out.p[i] += weight * static_cast<double>(counts[i]);
        }
        mean_length += prob * static_cast<double>(length);
    }
    out.total_letters = static_cast<std::uint64_t>(std::llround(mean_length * static_cast<double>(w.total_words)));
    return out;
}

WordDistribution mix(const WordDistribution& a, const WordDistribution& b, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("mix: alpha must lie in [0,1]");
    WordDistribution out;
    for (const auto& [word, prob] : a.p) out.p[word] += alpha * prob;
    for (const auto& [word, prob] : b.p) out.p[word] += (1.0 - alpha) * prob;
    std::erase_if(out.p, [](const auto& kv) { return kv.second == 0.0; });
    out.total_words = static_cast<std::uint64_t>(
        std::llround(alpha * static_cast<double>(a.total_words) + (1.0 - alpha) * static_cast<double>(b.total_words)));
    return out;
}

}  // namespace ldscore::chardist
