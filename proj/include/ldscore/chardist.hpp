#pragma once
// Letter and word distributions and the divergences between them.
//
// All logarithms are base 2, so JSD and its square root (the LD-Score) are
// bounded by 1. Zero bins need no smoothing: the mixture M = (P + Q) / 2 is
// positive wherever either input is.

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ldscore/text.hpp"

namespace ldscore::chardist {

using text::kAlphabetSize;
using text::LetterCounts;

struct LetterDistribution {
    std::array<double, kAlphabetSize> p{};
    std::uint64_t total_letters = 0;

    double operator[](char letter) const { return p[static_cast<std::size_t>(letter - 'a')]; }

    // Throws ValidationError when the counts are all zero.
    static LetterDistribution from_counts(const LetterCounts& counts);
};

struct WordDistribution {
    std::map<std::string, double> p;
    std::uint64_t total_words = 0;

    static WordDistribution from_counts(const std::map<std::string, std::uint64_t>& counts);
};

// Strong type for a root Jensen-Shannon distance in [0, 1].
struct LdScore {
    double value = 0.0;
    friend auto operator<=>(const LdScore&, const LdScore&) = default;
};

LetterDistribution letter_distribution(std::string_view text);

// Group distributions. Pooling sums raw counts over the texts; the
// per-sample mean averages each text's normalized distribution instead.
LetterDistribution pooled_distribution(std::span<const std::string> texts);
LetterDistribution mean_distribution(std::span<const std::string> texts);

double kl_divergence(std::span<const double> p, std::span<const double> q);
double jsd(std::span<const double> p, std::span<const double> q);

LdScore ld_score(const LetterDistribution& a, const LetterDistribution& b);

WordDistribution word_distribution(std::string_view text);
WordDistribution pooled_word_distribution(std::span<const std::string> texts);
double wd_score(const WordDistribution& a, const WordDistribution& b);

// P(l) = sum_w P(w) * L(w, l) / |w|, with |w| the number of a-z letters in
// the folded word. total_letters is the letter count implied by total_words.
LetterDistribution project_word_to_letter(const WordDistribution& w);

// alpha * a + (1 - alpha) * b over the union vocabulary.
WordDistribution mix(const WordDistribution& a, const WordDistribution& b, double alpha);

}  // namespace ldscore::chardist
